#include "liftedmix/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <queue>
#include <random>
#include <sstream>

namespace liftedmix {

Graph::Graph(int n, const std::vector<Edge>& edges) : n_(n) {
  if (n < 1) throw std::invalid_argument("graph needs at least one node");
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n)
      throw std::invalid_argument("edge (" + std::to_string(u) + "," + std::to_string(v) +
                                  ") out of range for n=" + std::to_string(n));
    edges_.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

  adj_.assign(n, {});
  self_loop_.assign(n, 0);
  for (auto [u, v] : edges_) {
    if (u == v) {
      self_loop_[u] = 1;
      ++num_self_loops_;
      continue;
    }
    adj_[u].push_back(v);
    adj_[v].push_back(u);
  }
  for (auto& a : adj_) {
    std::sort(a.begin(), a.end());
    max_degree_ = std::max(max_degree_, static_cast<int>(a.size()));
  }

  std::vector<int> dist = bfs_distances(*this, 0);
  if (std::find(dist.begin(), dist.end(), -1) != dist.end()) {
    int first = static_cast<int>(std::find(dist.begin(), dist.end(), -1) - dist.begin());
    std::vector<int> other = bfs_distances(*this, first);
    std::vector<int> component;
    for (int i = 0; i < n; ++i)
      if (other[i] >= 0) component.push_back(i);
    std::ostringstream msg;
    msg << "graph is disconnected; component {";
    for (std::size_t i = 0; i < component.size(); ++i) msg << (i ? "," : "") << component[i];
    msg << "} is unreachable from node 0";
    throw DisconnectedGraphError(msg.str(), std::move(component));
  }
}

bool Graph::has_edge(int u, int v) const {
  if (u == v) return self_loop_[u] != 0;
  const auto& a = adj_[u];
  return std::binary_search(a.begin(), a.end(), v);
}

bool Graph::conformant(int u, int v) const { return u == v || has_edge(u, v); }

namespace gen {

Graph ring(int n) {
  if (n < 3) throw std::invalid_argument("ring needs n >= 3");
  std::vector<Graph::Edge> e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return Graph(n, e);
}

Graph grid(int dim, int side) {
  if (dim < 1 || side < 2) throw std::invalid_argument("grid needs dim >= 1 and side >= 2");
  long total = 1;
  for (int k = 0; k < dim; ++k) total *= side;
  if (total > std::numeric_limits<int>::max() / 2) throw std::invalid_argument("grid too large");
  const int n = static_cast<int>(total);
  std::vector<Graph::Edge> e;
  for (int u = 0; u < n; ++u) {
    int stride = 1;
    for (int k = 0; k < dim; ++k) {
      int coord = (u / stride) % side;
      if (coord + 1 < side) e.emplace_back(u, u + stride);
      stride *= side;
    }
  }
  return Graph(n, e);
}

Graph barbell(int n) {
  if (n < 4 || n % 2 != 0) throw std::invalid_argument("barbell needs even n >= 4");
  const int h = n / 2;
  std::vector<Graph::Edge> e;
  for (int side = 0; side < 2; ++side) {
    int base = side * h;
    for (int i = 0; i < h; ++i)
      for (int j = i + 1; j < h; ++j) e.emplace_back(base + i, base + j);
  }
  e.emplace_back(h - 1, h);
  return Graph(n, e);
}

Graph complete(int n) {
  if (n < 1) throw std::invalid_argument("complete graph needs n >= 1");
  std::vector<Graph::Edge> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return Graph(n, e);
}

Graph path(int n) {
  if (n < 1) throw std::invalid_argument("path needs n >= 1");
  std::vector<Graph::Edge> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return Graph(n, e);
}

Graph star(int leaves) {
  if (leaves < 1) throw std::invalid_argument("star needs at least one leaf");
  std::vector<Graph::Edge> e;
  for (int i = 1; i <= leaves; ++i) e.emplace_back(0, i);
  return Graph(leaves + 1, e);
}

Graph edge_list(int n, const std::vector<Graph::Edge>& pairs) { return Graph(n, pairs); }

}  // namespace gen

GeneratorSpec GeneratorSpec::parse(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.empty()) throw std::invalid_argument("empty generator descriptor");
  GeneratorSpec spec;
  spec.kind = parts[0];
  auto to_int = [&](const std::string& s) {
    std::size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("bad integer '" + s + "' in '" + text + "'");
    return v;
  };
  if (spec.kind == "grid") {
    if (parts.size() != 3) throw std::invalid_argument("grid descriptor is grid:<dim>:<side>");
    spec.dim = to_int(parts[1]);
    spec.size = to_int(parts[2]);
  } else if (spec.kind == "edge_list") {
    if (parts.size() < 2) throw std::invalid_argument("edge_list descriptor is edge_list:<file>");
    spec.file = text.substr(text.find(':') + 1);
  } else if (spec.kind == "ring" || spec.kind == "barbell" || spec.kind == "complete" ||
             spec.kind == "path" || spec.kind == "star") {
    if (parts.size() != 2) throw std::invalid_argument(spec.kind + " descriptor is " + spec.kind + ":<n>");
    spec.size = to_int(parts[1]);
  } else {
    throw std::invalid_argument("unknown graph kind '" + spec.kind + "'");
  }
  return spec;
}

std::string GeneratorSpec::to_string() const {
  if (kind == "grid") return "grid:" + std::to_string(dim) + ":" + std::to_string(size);
  if (kind == "edge_list") return "edge_list:" + file;
  return kind + ":" + std::to_string(size);
}

Graph generate(const GeneratorSpec& spec) {
  if (spec.kind == "ring") return gen::ring(spec.size);
  if (spec.kind == "grid") return gen::grid(spec.dim, spec.size);
  if (spec.kind == "barbell") return gen::barbell(spec.size);
  if (spec.kind == "complete") return gen::complete(spec.size);
  if (spec.kind == "path") return gen::path(spec.size);
  if (spec.kind == "star") return gen::star(spec.size);
  if (spec.kind == "edge_list") return read_edge_list_file(spec.file);
  throw std::invalid_argument("unknown graph kind '" + spec.kind + "'");
}

Graph read_edge_list(std::istream& in) {
  std::vector<Graph::Edge> edges;
  int max_id = -1;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    long u, v;
    if (!(ls >> u)) continue;
    if (!(ls >> v)) throw std::invalid_argument("line " + std::to_string(lineno) + ": expected 'u v'");
    std::string rest;
    if (ls >> rest) throw std::invalid_argument("line " + std::to_string(lineno) + ": trailing tokens");
    if (u < 0 || v < 0 || u > std::numeric_limits<int>::max() / 2 || v > std::numeric_limits<int>::max() / 2)
      throw std::invalid_argument("line " + std::to_string(lineno) + ": node id out of range");
    edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
    max_id = std::max<int>(max_id, static_cast<int>(std::max(u, v)));
  }
  if (max_id < 0) throw std::invalid_argument("edge list is empty");
  return Graph(max_id + 1, edges);
}

Graph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open edge list '" + path + "'");
  return read_edge_list(in);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << "# n=" << g.num_nodes() << " m=" << g.num_edges() << "\n";
  for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

std::vector<int> bfs_distances(const Graph& g, int src) {
  return bfs_distances(g, src, std::numeric_limits<int>::max());
}

std::vector<int> bfs_distances(const Graph& g, int src, int radius) {
  std::vector<int> dist(g.num_nodes(), -1);
  std::vector<int> queue;
  queue.reserve(g.num_nodes());
  dist[src] = 0;
  queue.push_back(src);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    int u = queue[head];
    if (dist[u] == radius) continue;
    for (int v : g.neighbors(u)) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

std::vector<int> shortest_path(const Graph& g, int src, int dst) {
  // BFS from dst so that following parents from src walks toward dst.
  std::vector<int> parent(g.num_nodes(), -1);
  std::vector<int> queue{dst};
  parent[dst] = dst;
  for (std::size_t head = 0; head < queue.size() && parent[src] < 0; ++head) {
    int u = queue[head];
    for (int v : g.neighbors(u)) {
      if (parent[v] < 0) {
        parent[v] = u;
        queue.push_back(v);
      }
    }
  }
  std::vector<int> path{src};
  for (int u = src; u != dst; u = parent[u]) path.push_back(parent[u]);
  return path;
}

std::vector<int> eccentricities(const Graph& g) {
  std::vector<int> ecc(g.num_nodes());
  for (int u = 0; u < g.num_nodes(); ++u) {
    auto d = bfs_distances(g, u);
    ecc[u] = *std::max_element(d.begin(), d.end());
  }
  return ecc;
}

Diameter diameter(const Graph& g) {
  if (g.num_nodes() <= kAllPairsLimit) {
    auto ecc = eccentricities(g);
    return {*std::max_element(ecc.begin(), ecc.end()), true};
  }
  auto d0 = bfs_distances(g, 0);
  int a = static_cast<int>(std::max_element(d0.begin(), d0.end()) - d0.begin());
  auto da = bfs_distances(g, a);
  return {*std::max_element(da.begin(), da.end()), false};
}

int graph_center(const Graph& g) {
  auto ecc = eccentricities(g);
  return static_cast<int>(std::min_element(ecc.begin(), ecc.end()) - ecc.begin());
}

int RNet::center_index(int center) const {
  auto it = std::lower_bound(centers.begin(), centers.end(), center);
  if (it == centers.end() || *it != center) return -1;
  return static_cast<int>(it - centers.begin());
}

RNet greedy_r_net(const Graph& g, int radius) {
  if (radius < 1) throw std::invalid_argument("R-net radius must be >= 1");
  const int n = g.num_nodes();
  RNet net;
  net.radius = radius;
  std::vector<char> covered(n, 0);
  // best (distance, center) per node; centers arrive in ascending order so a
  // strict improvement test keeps the lowest index on ties.
  std::vector<int> best_dist(n, std::numeric_limits<int>::max());
  net.assignment.assign(n, -1);
  for (int u = 0; u < n; ++u) {
    if (covered[u]) continue;
    net.centers.push_back(u);
    auto d = bfs_distances(g, u, radius);
    for (int w = 0; w < n; ++w) {
      if (d[w] < 0) continue;
      covered[w] = 1;
    }
  }
  for (int y : net.centers) {
    auto d = bfs_distances(g, y, radius);
    for (int w = 0; w < n; ++w) {
      if (d[w] >= 0 && d[w] < best_dist[w]) {
        best_dist[w] = d[w];
        net.assignment[w] = y;
      }
    }
  }
  net.clusters.assign(net.centers.size(), {});
  for (int w = 0; w < n; ++w) net.clusters[net.center_index(net.assignment[w])].push_back(w);
  return net;
}

RNetCheck check_r_net(const Graph& g, const RNet& net) {
  RNetCheck check;
  const int n = g.num_nodes();
  if (static_cast<int>(net.assignment.size()) != n) {
    check.covering = check.partition = false;
    return check;
  }
  for (std::size_t a = 0; a < net.centers.size(); ++a) {
    auto d = bfs_distances(g, net.centers[a]);
    for (std::size_t b = 0; b < net.centers.size(); ++b)
      if (a != b && d[net.centers[b]] <= net.radius) check.separated = false;
  }
  for (int w = 0; w < n; ++w) {
    int y = net.assignment[w];
    if (y < 0 || net.center_index(y) < 0) {
      check.covering = false;
      continue;
    }
    auto d = bfs_distances(g, y, net.radius);
    if (d[w] < 0) check.covering = false;
  }
  std::vector<int> seen(n, 0);
  if (net.clusters.size() != net.centers.size()) check.partition = false;
  for (std::size_t a = 0; a < net.clusters.size() && a < net.centers.size(); ++a) {
    for (int w : net.clusters[a]) {
      ++seen[w];
      if (net.assignment[w] != net.centers[a]) check.partition = false;
    }
  }
  for (int w = 0; w < n; ++w)
    if (seen[w] != 1) check.partition = false;
  return check;
}

double DoublingEstimate::dimension() const { return std::log2(static_cast<double>(constant)); }

namespace {

// Balls are closed: the supremum over real r of the open-ball cover number
// is reached as r approaches an integer a from above, which turns
// B(x, r) into {d <= a} and B(y, r/2) into {d <= floor(a/2)}.
int greedy_cover(const std::vector<std::vector<int>>& candidate_sets, std::size_t universe) {
  std::vector<char> covered(universe, 0);
  std::size_t remaining = universe;
  int count = 0;
  while (remaining > 0) {
    std::size_t best = 0, best_gain = 0;
    for (std::size_t c = 0; c < candidate_sets.size(); ++c) {
      std::size_t gain = 0;
      for (int e : candidate_sets[c]) gain += covered[e] ? 0 : 1;
      if (gain > best_gain) {
        best_gain = gain;
        best = c;
      }
    }
    if (best_gain == 0) break;
    for (int e : candidate_sets[best]) {
      if (!covered[e]) {
        covered[e] = 1;
        --remaining;
      }
    }
    ++count;
  }
  return count;
}

class BitBalls {
 public:
  explicit BitBalls(const Graph& g) : n_(g.num_nodes()), words_((n_ + 63) / 64) {
    dist_.resize(static_cast<std::size_t>(n_) * n_);
    for (int u = 0; u < n_; ++u) {
      auto d = bfs_distances(g, u);
      std::copy(d.begin(), d.end(), dist_.begin() + static_cast<std::ptrdiff_t>(u) * n_);
    }
  }
  int dist(int u, int v) const { return dist_[static_cast<std::size_t>(u) * n_ + v]; }

  const std::uint64_t* ball(int y, int h) {
    if (h >= static_cast<int>(cache_.size())) cache_.resize(h + 1);
    auto& level = cache_[h];
    if (level.empty()) {
      level.assign(static_cast<std::size_t>(n_) * words_, 0);
      for (int u = 0; u < n_; ++u)
        for (int v = 0; v < n_; ++v)
          if (dist(u, v) <= h) level[static_cast<std::size_t>(u) * words_ + v / 64] |= 1ULL << (v % 64);
    }
    return level.data() + static_cast<std::size_t>(y) * words_;
  }

  int cover_number(int x, int a) {
    const int h = a / 2;
    std::vector<std::uint64_t> uncovered(ball(x, a), ball(x, a) + words_);
    int count = 0;
    for (;;) {
      int best_gain = 0, best = -1;
      for (int y = 0; y < n_; ++y) {
        if (dist(x, y) > a + h) continue;
        const std::uint64_t* b = ball(y, h);
        int gain = 0;
        for (int w = 0; w < words_; ++w) gain += std::popcount(b[w] & uncovered[w]);
        if (gain > best_gain) {
          best_gain = gain;
          best = y;
        }
      }
      if (best < 0) break;
      const std::uint64_t* b = ball(best, h);
      for (int w = 0; w < words_; ++w) uncovered[w] &= ~b[w];
      ++count;
    }
    return count;
  }

 private:
  int n_, words_;
  std::vector<int> dist_;
  std::vector<std::vector<std::uint64_t>> cache_;
};

}  // namespace

DoublingEstimate doubling_constant(const Graph& g, int sample_budget, std::uint64_t seed) {
  const int n = g.num_nodes();
  DoublingEstimate est;
  if (n == 1) return est;
  if (n <= kDoublingExactLimit) {
    BitBalls balls(g);
    for (int x = 0; x < n; ++x) {
      int ecc = 0;
      for (int v = 0; v < n; ++v) ecc = std::max(ecc, balls.dist(x, v));
      for (int a = 1; a <= ecc; ++a) est.constant = std::max(est.constant, balls.cover_number(x, a));
    }
    est.exact = true;
    return est;
  }
  est.exact = false;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick_node(0, n - 1);
  for (int s = 0; s < sample_budget; ++s) {
    int x = pick_node(rng);
    auto dx = bfs_distances(g, x);
    int ecc = *std::max_element(dx.begin(), dx.end());
    int a = std::uniform_int_distribution<int>(1, ecc)(rng);
    int h = a / 2;
    std::vector<int> local(n, -1);
    int universe = 0;
    for (int v = 0; v < n; ++v)
      if (dx[v] <= a) local[v] = universe++;
    std::vector<std::vector<int>> sets;
    for (int y = 0; y < n; ++y) {
      if (dx[y] > a + h) continue;
      auto dy = bfs_distances(g, y, h);
      std::vector<int> members;
      for (int v = 0; v < n; ++v)
        if (dy[v] >= 0 && local[v] >= 0) members.push_back(local[v]);
      sets.push_back(std::move(members));
    }
    est.constant = std::max(est.constant, greedy_cover(sets, universe));
  }
  return est;
}

GraphMetrics graph_metrics(const Graph& g, int sample_budget) {
  GraphMetrics m;
  m.n = g.num_nodes();
  m.m = g.num_edges();
  m.diam = diameter(g);
  m.doubling = doubling_constant(g, sample_budget);
  return m;
}

}  // namespace liftedmix
