#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <vector>

#include "liftedmix/graph.hpp"
#include "liftedmix/types.hpp"

namespace liftedmix {

/// Row-stochastic chain with its stationary distribution. The graph is the
/// substrate the chain conforms to; lifted chains carry no graph of their own
/// (conformance is checked through the projection instead).
class Chain {
 public:
  Chain() = default;

  /// Solves pi^T (P - I) = 0, sum(pi) = 1. Throws on a reducible P.
  static Chain from_transition(SparseMatrix P, std::shared_ptr<const Graph> graph = nullptr);
  /// Uses a known stationary distribution; rows and pi are checked.
  static Chain from_transition(SparseMatrix P, Vector pi, std::shared_ptr<const Graph> graph);
  /// P_ij = Q_ij / pi_i with pi the row sums of Q. Q must be flow-balanced.
  static Chain from_flow(const SparseMatrix& Q, std::shared_ptr<const Graph> graph = nullptr);

  Index size() const noexcept { return P_.rows(); }
  const SparseMatrix& P() const noexcept { return P_; }
  const Vector& pi() const noexcept { return pi_; }
  const std::shared_ptr<const Graph>& graph() const noexcept { return graph_; }

  /// Q = diag(pi) P.
  SparseMatrix ergodic_flow() const;
  /// Non-zero off-diagonal entries of P.
  Index nnz() const;
  double pi_min() const { return pi_.minCoeff(); }
  bool is_reversible(double tol = kSolveTol) const;

 private:
  Chain(SparseMatrix P, Vector pi, std::shared_ptr<const Graph> graph);

  SparseMatrix P_;
  Vector pi_;
  std::shared_ptr<const Graph> graph_;
};

struct ChainCheck {
  double row_sum_residual = 0;
  double stationarity_residual = 0;  // ||pi^T P - pi^T||_inf
  double flow_total_residual = 0;    // |sum Q - 1|
  double flow_balance_residual = 0;  // max_j |colsum_j Q - pi_j|, |rowsum_j Q - pi_j|
  double negative_entry = 0;         // most negative entry of P, as a magnitude
  int conformance_violations = 0;

  bool ok(double tol = kSolveTol) const {
    return row_sum_residual <= kExactTol && stationarity_residual <= tol &&
           flow_total_residual <= tol && flow_balance_residual <= tol &&
           negative_entry == 0 && conformance_violations == 0;
  }
};

ChainCheck validate(const Chain& c);

/// Stationary distribution of an irreducible row-stochastic matrix.
Vector stationary_distribution(const SparseMatrix& P);

// ---------------------------------------------------------------------------
// Constructions

Chain metropolis_hastings(std::shared_ptr<const Graph> g, const Vector& pi);
Chain metropolis_hastings(const Graph& g, const Vector& pi);
/// P_ij = 1/deg(i) on neighbors; pi proportional to degree.
Chain uniform_neighbor_walk(const Graph& g);
/// P = [1/n] on the complete graph.
Chain complete_chain(int n);
Chain identity_chain(int n);
Vector uniform_distribution(Index n);

/// (I + P) / 2.
Chain lazy(const Chain& c);
/// P*_ij = pi_j P_ji / pi_i.
Chain reverse(const Chain& c);

// ---------------------------------------------------------------------------
// Distances, templated so they accept any Eigen expression.

template <typename Mu, typename Pi>
typename Mu::Scalar tv_distance(const Eigen::MatrixBase<Mu>& mu, const Eigen::MatrixBase<Pi>& pi) {
  return typename Mu::Scalar(0.5) * (mu.derived() - pi.derived()).cwiseAbs().sum();
}

template <typename Mu, typename Pi>
typename Mu::Scalar chi2_distance(const Eigen::MatrixBase<Mu>& mu, const Eigen::MatrixBase<Pi>& pi) {
  return std::sqrt(((mu.derived() - pi.derived()).array().square() / pi.derived().array()).sum());
}

// ---------------------------------------------------------------------------
// Conductance

enum class ConductanceMode { Exact, SpectralBounds };

inline constexpr int kExactConductanceLimit = 24;

struct ConductanceResult {
  ConductanceMode mode = ConductanceMode::Exact;
  double value = 0;  // exact mode only
  double lower = 0;
  double upper = 0;
  std::vector<int> cut;  // minimizing S, exact mode only
};

/// Cut ratio Q(S, V\S) / (pi(S) pi(V\S)) evaluated from Q.
double cut_ratio(const Chain& c, const std::vector<int>& S);
ConductanceResult conductance(const Chain& c, ConductanceMode mode = ConductanceMode::Exact);

// ---------------------------------------------------------------------------
// Spectra

inline constexpr Index kDenseSpectralLimit = 4096;

struct SpectralReport {
  std::optional<double> gap;  // of P, reversible chains only
  double multiplicative_gap = 0;  // gap of P P*
  double pi_min = 0;
  bool reversible = false;
  bool iterative = false;

  /// ceil((2 / gap(PP*)) log(1 / (eps sqrt(pi_min)))); empty when gap(PP*) = 0.
  std::optional<long> tau2_upper(double eps) const;
};

/// Dense eigensolves up to 4096 states, deflated power iteration above.
SpectralReport spectral(const Chain& c);
/// 1 - lambda_2 of the additive symmetrization (P + P*)/2.
double additive_gap(const Chain& c);

// ---------------------------------------------------------------------------
// Mixing

enum class StartMode { ExactAllStarts, SampledStarts };

inline constexpr Index kExactMixingLimit = 2048;

struct MixingOptions {
  /// Explicit start set; empty means all starts when the chain is small
  /// enough, otherwise default_sampled_starts().
  std::vector<Index> starts;
  bool chi2 = true;
  bool spectral_bound = true;
  long max_steps = 10'000'000;
};

struct MixingReport {
  double epsilon = 0;
  long tau_tv = 0;
  long tau_chi2 = -1;  // -1 when not computed
  StartMode start_mode = StartMode::ExactAllStarts;
  std::vector<double> distance_trace;  // worst TV at t = 0..tau_tv
  std::vector<Index> starts;           // empty for exact-all-starts
  std::optional<long> spectral_upper;  // tau2_upper(eps), which also bounds tau(eps)

  /// A sampled start set only certifies a lower bound on tau(eps).
  bool lower_bound_only() const { return start_mode == StartMode::SampledStarts; }
};

/// Given starts plus the two ends of a double sweep over the support graph.
std::vector<Index> default_sampled_starts(const Chain& c, std::vector<Index> base);

MixingReport tv_mixing_time(const Chain& c, double eps, const MixingOptions& opts = {});

// ---------------------------------------------------------------------------
// Induced chains and spectral comparison

/// Chain of the states in `observed` visited in order by a walk of c.
/// Its stationary distribution is pi restricted to `observed`, renormalized.
Chain induced_chain(const Chain& c, const std::vector<Index>& observed);

struct MinorizationReport {
  double lambda_p1p1star = 0;
  double lambda_p2 = 0;
  double bound_a2 = 0;
  bool a2_holds = false;
  bool p1_reversible = false;
  std::optional<double> lambda_p1;
  std::optional<double> bound_a1;
  std::optional<bool> a1_holds;
};

/// Checks P1 >= alpha P2, P1 >= beta I, c pi2 <= pi1 <= d pi2 and P2 reversible
/// (throws HypothesisViolation otherwise), then compares both sides of
/// lambda(P1 P1*) >= min(alpha beta c / d^2 lambda(P2), 2 beta^2), plus
/// lambda(P1) >= min(alpha c / d^2 lambda(P2), 2 beta) when P1 is reversible.
MinorizationReport spectral_minorization_check(const Chain& c1, const Chain& c2, double alpha,
                                               double beta, double c, double d);

/// Dense copy; test and oracle helper.
Matrix to_dense(const SparseMatrix& m);

}  // namespace liftedmix
