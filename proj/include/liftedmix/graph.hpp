#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "liftedmix/types.hpp"

namespace liftedmix {

/// Undirected connected graph on nodes 0..n-1. Self-loops are allowed.
/// Immutable after construction.
class Graph {
 public:
  using Edge = std::pair<int, int>;

  Graph() = default;
  /// Duplicate pairs collapse; (u,v) and (v,u) are the same edge.
  /// Throws std::invalid_argument on out-of-range ids and
  /// DisconnectedGraphError when some node is unreachable from 0.
  Graph(int n, const std::vector<Edge>& edges);

  int num_nodes() const noexcept { return n_; }
  /// Undirected edge count, self-loops included.
  int num_edges() const noexcept { return static_cast<int>(edges_.size()); }
  /// Number of ordered pairs (u,v), u != v, with {u,v} an edge.
  int num_arcs() const noexcept { return 2 * (num_edges() - num_self_loops_); }

  /// Edges with u <= v, sorted.
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  /// Sorted neighbors of u, excluding u itself.
  const std::vector<int>& neighbors(int u) const { return adj_[u]; }
  int degree(int u) const { return static_cast<int>(adj_[u].size()); }
  int max_degree() const noexcept { return max_degree_; }
  bool has_self_loop(int u) const { return self_loop_[u] != 0; }

  /// True for u == v (self-transitions are always conformant) or {u,v} in E.
  bool conformant(int u, int v) const;
  bool has_edge(int u, int v) const;

 private:
  int n_ = 0;
  int max_degree_ = 0;
  int num_self_loops_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adj_;
  std::vector<char> self_loop_;
};

/// Generator descriptors.
namespace gen {
Graph ring(int n);
/// d-dimensional lattice with `side` nodes per axis (not a torus).
Graph grid(int dim, int side);
/// Two complete graphs on n/2 nodes joined by one edge between nodes
/// n/2-1 and n/2. Requires even n >= 4.
Graph barbell(int n);
Graph complete(int n);
Graph path(int n);
/// Star K_{1,leaves} with hub 0.
Graph star(int leaves);
Graph edge_list(int n, const std::vector<Graph::Edge>& pairs);
}  // namespace gen

/// Parsed generator descriptor such as "ring:16", "grid:2:8", "barbell:12".
struct GeneratorSpec {
  std::string kind;
  int size = 0;  // ring/barbell/complete/path n; grid side
  int dim = 1;   // grid only
  std::string file;

  static GeneratorSpec parse(const std::string& text);
  std::string to_string() const;
};

Graph generate(const GeneratorSpec& spec);

/// Edge-list text: one "u v" pair per line, 0-based, '#' starts a comment.
/// n is one more than the largest id seen.
Graph read_edge_list(std::istream& in);
Graph read_edge_list_file(const std::string& path);
void write_edge_list(std::ostream& out, const Graph& g);

// ---------------------------------------------------------------------------
// Metric structure

/// Hop distances from src; every entry is finite for a connected graph.
std::vector<int> bfs_distances(const Graph& g, int src);
/// BFS restricted to distance <= radius; unreached nodes hold -1.
std::vector<int> bfs_distances(const Graph& g, int src, int radius);
/// Shortest path src -> dst with parents chosen by lowest index.
std::vector<int> shortest_path(const Graph& g, int src, int dst);

struct Diameter {
  int value = 0;
  bool exact = true;
};

inline constexpr int kAllPairsLimit = 4096;

/// Exact for n <= 4096; above that a double-sweep lower bound.
Diameter diameter(const Graph& g);
std::vector<int> eccentricities(const Graph& g);
/// Lowest-index node of minimum eccentricity.
int graph_center(const Graph& g);

struct RNet {
  int radius = 0;
  std::vector<int> centers;     // ascending
  std::vector<int> assignment;  // node -> center
  std::vector<std::vector<int>> clusters;  // parallel to centers

  /// Index of `center` in `centers`, or -1.
  int center_index(int center) const;
};

/// Greedy scan in ascending node order; nearest center wins, ties to the
/// lowest center index.
RNet greedy_r_net(const Graph& g, int radius);

struct RNetCheck {
  bool covering = true;   // every node within R of its center
  bool separated = true;  // centers pairwise more than R apart
  bool partition = true;  // clusters match assignment
  bool ok() const { return covering && separated && partition; }
};
RNetCheck check_r_net(const Graph& g, const RNet& net);

struct DoublingEstimate {
  int constant = 1;  // K, an upper estimate from greedy cover
  bool exact = true;  // all (x, r) examined rather than sampled
  double dimension() const;
};

inline constexpr int kDoublingExactLimit = 512;

DoublingEstimate doubling_constant(const Graph& g, int sample_budget = 2000,
                                   std::uint64_t seed = 1);

struct GraphMetrics {
  int n = 0;
  int m = 0;
  Diameter diam;
  DoublingEstimate doubling;
};
GraphMetrics graph_metrics(const Graph& g, int sample_budget = 2000);

}  // namespace liftedmix
