#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "liftedmix/chain.hpp"
#include "liftedmix/flows.hpp"

namespace liftedmix {

enum class LiftKind { Lifting, PseudoLifting };
enum class Construction { Identity, Star, Hierarchical, Expander };

std::string to_string(LiftKind k);
std::string to_string(Construction c);

/// One added directed path. `states` runs source to sink in the lifted
/// chain, `copied` holds f of each state.
struct LiftPath {
  std::string role;
  Index source = 0;
  Index sink = 0;
  std::vector<int> copied;
  std::vector<Index> states;

  int length() const { return static_cast<int>(states.size()) - 1; }
};

/// A chain on copies of the original nodes. States 0..n-1 are the copies of
/// V(G) themselves; added states follow.
struct LiftedChain {
  Chain chain;
  Chain origin;
  std::vector<int> f;        // lifted state -> original node
  std::vector<Index> marked;  // T; empty for a lifting
  LiftKind kind = LiftKind::Lifting;
  Construction construction = Construction::Identity;
  std::vector<LiftPath> paths;

  int root = -1;
  int diameter = 0;
  int radius = 0;     // hierarchical only
  int num_centers = 0;
  double delta = 0;   // delta_1 or delta_2
  int W = 0;          // expander only
  bool lazified = false;
  int clamped_edges = 0;

  Index num_original() const { return origin.size(); }
  std::vector<Index> original_states() const;
  /// Edges of the lifted graph: the original undirected edges plus every
  /// directed path edge.
  long edge_count() const;
};

/// The chain lifted onto itself (f = identity, T = V).
LiftedChain identity_lift(const Chain& c);

/// 1/2 = delta (1 - 1/(2L)).
double delta_for_length(int L);

struct StarLiftParams {
  std::optional<int> root;  // graph center when absent
};

LiftedChain star_pseudo_lift(const Chain& c, const StarLiftParams& params = {});

struct HierLiftParams {
  std::optional<int> root;
  std::optional<int> radius;  // auto from the doubling estimate when absent
};

/// R = ceil(D 2^{rho/(rho+1)} n^{-1/(rho+1)}) clamped to [1, D].
int auto_net_radius(int n, int diameter, double rho);

LiftedChain hierarchical_pseudo_lift(const Chain& c, const HierLiftParams& params = {});

/// Expander lifting from a feasible flow. A chain that is not at least I/2 on
/// the diagonal is made lazy first. Throws CongestionError when an original
/// edge would go negative.
LiftedChain expander_lift(const Chain& c, const FlowDecomposition& flow);

struct LiftValidity {
  int conformance_violations = 0;
  double pi_total_residual = 0;    // |sum pi_hat - 1|
  double flow_total_residual = 0;  // |sum Q_hat - 1|
  double stationarity_residual = 0;
  std::optional<double> pi_projection_residual;  // lifting: max_u |pi(u) - pi_hat(f^-1(u))|
  std::optional<double> q_projection_residual;   // lifting: max_uv |Q(u,v) - Q_hat(f^-1(u), f^-1(v))|
  std::optional<double> marked_mass_residual;    // pseudo: max_u |pi_hat(f^-1(u) & T) - pi(u)/2|
  bool marked_size_ok = true;

  bool conformance_ok() const { return conformance_violations == 0; }
  bool projection_ok(double tol = kSolveTol) const;
  bool ok(double tol = kSolveTol) const;
};

LiftValidity validate_lift(const LiftedChain& lc);

/// Next original node visited, as a chain on V.
Chain induced_chain(const LiftedChain& lc);

/// Mixing time over the original nodes plus the two ends of a double sweep
/// when the lift is too large for all starts.
MixingReport lift_mixing_time(const LiftedChain& lc, double eps, MixingOptions opts = {});

struct StoppingRuleReport {
  long trials = 0;
  double mean_length = 0;
  Vector empirical;  // over lifted states
  double tv_to_stationary = 0;
  int start = 0;
};

/// Monte-Carlo run of the four-branch stopping rule on a star lift. The start
/// defaults to the original node farthest from the root.
StoppingRuleReport simulate_star_stopping_rule(const LiftedChain& lc, long trials, std::uint64_t seed,
                                               std::optional<int> start = std::nullopt);

}  // namespace liftedmix
