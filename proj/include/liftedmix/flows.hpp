#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "liftedmix/chain.hpp"

namespace liftedmix {

/// d-regular graph on the chain's vertex set with its reversible chain P^Ex:
/// P_ij = pi0 / (d pi_i) on edges, P_ii = 1 - pi0 / pi_i.
struct ExpanderSpec {
  std::shared_ptr<const Graph> graph;
  int degree = 0;
  Chain chain;
  double spectral_gap = 0;               // 1 - lambda_2 of P^Ex
  std::optional<double> edge_expansion;  // exact h(G) for n <= 24
  std::uint64_t seed = 0;                // seed of the accepted sample
  int attempts = 0;
};

inline constexpr double kExpanderGapThreshold = 0.05;
inline constexpr double kExpanderEdgeExpansionThreshold = 0.25;
inline constexpr double kMaxPiRatio = 8.0;

/// P^Ex for a given d-regular graph. Throws unless g is d-regular and
/// pi_max / pi_min <= 8.
Chain expander_chain(std::shared_ptr<const Graph> g, const Vector& pi);

/// Wraps a given regular graph (e.g. K4) with its certificate.
ExpanderSpec make_expander_spec(std::shared_ptr<const Graph> g, const Vector& pi);

/// Random d-regular graph by the configuration model, resampled until simple,
/// connected and certified. Throws CertificationError after max_attempts.
ExpanderSpec build_expander(int n, int d, const Vector& pi, std::uint64_t seed,
                            int max_attempts = 200);

/// Exact edge expansion min_{|S| <= n/2} |E(S, S^c)| / |S|, n <= 24.
double edge_expansion(const Graph& g);

struct FlowPath {
  std::vector<int> nodes;  // s ... t; a single node for s == t
  double weight = 0;

  int source() const { return nodes.front(); }
  int sink() const { return nodes.back(); }
  int length() const { return static_cast<int>(nodes.size()) - 1; }
};

struct Commodity {
  int source = 0;
  int sink = 0;
  double demand = 0;  // pi_s P^Ex_st
};

/// Weighted paths realizing one unit of balanced flow. Self-loop demands of
/// P^Ex (non-uniform pi) are carried by zero-length paths so that the path
/// weights still sum to one and start/end at each i with total pi_i.
struct FlowDecomposition {
  int W = 1;
  std::vector<Commodity> demands;
  std::vector<FlowPath> paths;  // grouped by commodity, in demand order

  /// Load per directed arc (i,j), i != j.
  std::map<std::pair<int, int>, double> loads() const;
  int max_length() const;
  /// Paths with at least one edge.
  std::size_t support() const;
};

struct FlowInfeasible {
  int W = 1;
  double min_congestion = 0;  // optimal lambda, i.e. max load / (W Q); +inf if some path exceeds W
  std::string reason;
};

using FlowResult = std::variant<FlowDecomposition, FlowInfeasible>;

/// Commodities of the expander chain, (s,t) over arcs of G^Ex plus self-loops.
std::vector<Commodity> expander_demands(const ExpanderSpec& ex);

/// Minimizes the congestion lambda of a path flow over paths of length <= W by
/// column generation; feasible when lambda <= 1.
FlowResult solve_balanced_flow(const Chain& c, const ExpanderSpec& ex, int W);

struct FlowSearch {
  FlowDecomposition flow;
  int W0 = 1;
  std::vector<int> tried;
};

/// Lower bound for the search: ceil(1 / Phi) with exact Phi for n <= 24,
/// otherwise ceil(1 / upper Cheeger bound).
int initial_flow_budget(const Chain& c);

/// Doubles W from initial_flow_budget(c) until solve_balanced_flow succeeds.
FlowSearch find_feasible_flow(const Chain& c, const ExpanderSpec& ex, int max_W = 1 << 16);

struct FlowCheck {
  double total_residual = 0;    // |sum w - 1|
  double demand_residual = 0;   // max over commodities
  double source_residual = 0;   // max_i |sum_{starts at i} w - pi_i|
  double sink_residual = 0;     // max_i |sum_{ends at i} w - pi_i|
  double capacity_excess = 0;   // max over arcs of load - W Q, clipped at 0
  int max_length = 0;
  int W = 0;
  int non_adjacent_steps = 0;
  int non_positive_weights = 0;

  bool ok(double tol = kSolveTol) const {
    return total_residual <= tol && demand_residual <= tol && source_residual <= tol &&
           sink_residual <= tol && capacity_excess <= tol && max_length <= W &&
           non_adjacent_steps == 0 && non_positive_weights == 0;
  }
};

/// Rechecks every invariant from the raw path list.
FlowCheck check_flow(const FlowDecomposition& fd, const Chain& c);

struct PruneResult {
  FlowDecomposition flow;
  std::size_t support_before = 0;
  std::size_t support_after = 0;
  bool stalled = false;
};

/// Moves along null directions of the tight constraints until the path set is
/// a vertex of the flow polytope at fixed W.
PruneResult prune_to_extreme(const FlowDecomposition& fd, const Chain& c, const ExpanderSpec& ex);

/// |E^Ex| + |E| counted as directed arcs.
std::size_t support_bound(const Chain& c, const ExpanderSpec& ex);

}  // namespace liftedmix
