#include "liftedmix/averaging.hpp"

#include <algorithm>
#include <cmath>

namespace liftedmix {

namespace {

double estimate_factor(const LiftedChain& lc) {
  if (lc.construction == Construction::Identity) return 1.0;
  if (lc.kind == LiftKind::PseudoLifting) return 2.0;
  throw std::invalid_argument("averaging runs on identity lifts and pseudo-liftings only");
}

bool is_uniform(const Vector& pi) {
  return (pi.array() - 1.0 / static_cast<double>(pi.size())).abs().maxCoeff() <= kExactTol;
}

bool is_doubly_stochastic(const SparseMatrix& P) {
  Vector col = Vector::Zero(P.cols());
  for (Index i = 0; i < P.outerSize(); ++i)
    for (SparseMatrix::InnerIterator it(P, i); it; ++it) col[it.col()] += it.value();
  return (col.array() - 1.0).abs().maxCoeff() <= kExactTol;
}

// Relative error of each column's estimates against its target.
Vector column_errors(const Matrix& Y, Index n, double factor, const Vector& targets) {
  Vector err(Y.cols());
  for (Index c = 0; c < Y.cols(); ++c)
    err[c] = ((factor * Y.col(c).head(n)).array() - targets[c]).abs().maxCoeff() / targets[c];
  return err;
}

}  // namespace

AveragingState init_state(const LiftedChain& lc, const Vector& x) {
  estimate_factor(lc);
  const Index n = lc.num_original();
  if (x.size() != n) throw std::invalid_argument("x must have one value per original node");
  if (x.minCoeff() <= 0) throw std::invalid_argument("averaging inputs must be strictly positive");
  AveragingState s;
  s.lift = &lc;
  s.x = x;
  s.y = Vector::Zero(lc.chain.size());
  s.y.head(n) = x;
  return s;
}

void step(AveragingState& s) {
  s.y = s.lift->chain.P() * s.y;
  ++s.t;
}

Vector estimates(const AveragingState& s) {
  return estimate_factor(*s.lift) * s.y.head(s.lift->num_original());
}

double averaging_target(const LiftedChain& lc, const Vector& x) { return x.dot(lc.origin.pi()); }

RunReport run_until(AveragingState& s, double eps, long step_cap) {
  if (!(eps > 0 && eps < 1)) throw std::invalid_argument("eps must lie in (0,1)");
  const LiftedChain& lc = *s.lift;
  RunReport r;
  r.epsilon = eps;
  r.mode = AveragingMode::Given;
  r.ops_per_iter = lc.chain.nnz();
  r.uniform_target = is_uniform(lc.origin.pi());
  r.sum_conserved_checked = is_doubly_stochastic(lc.chain.P());
  const double target = averaging_target(lc, s.x);
  const double sum0 = s.y.sum();
  const long t0 = s.t;
  double best = std::numeric_limits<double>::infinity();
  for (;;) {
    const double err = (estimates(s).array() - target).abs().maxCoeff() / target;
    r.error_trace.push_back(err);
    best = std::min(best, err);
    if (r.sum_conserved_checked) r.sum_drift = std::max(r.sum_drift, std::abs(s.y.sum() - sum0) / sum0);
    if (err <= eps) break;
    if (s.t - t0 >= step_cap) throw StepCapExceeded(step_cap, best);
    step(s);
  }
  r.T_eps = s.t - t0;
  r.total_cost = r.T_eps * r.ops_per_iter;
  return r;
}

RunReport worst_case(const LiftedChain& lc, double eps, long step_cap) {
  if (!(eps > 0 && eps < 1)) throw std::invalid_argument("eps must lie in (0,1)");
  const double factor = estimate_factor(lc);
  const Index n = lc.num_original();
  const Index N = lc.chain.size();
  RunReport r;
  r.epsilon = eps;
  r.mode = AveragingMode::WorstCase;
  r.ops_per_iter = lc.chain.nnz();
  r.uniform_target = is_uniform(lc.origin.pi());
  r.sum_conserved_checked = is_doubly_stochastic(lc.chain.P());

  Matrix Y = Matrix::Zero(N, n);
  Y.topRows(n).setOnes();
  Y.topRows(n).diagonal().array() += 1.0;
  const Vector targets = lc.origin.pi().array() + 1.0;  // <1 + e_i, pi>
  const Eigen::RowVectorXd sum0 = Y.colwise().sum();
  std::vector<long> hit(static_cast<std::size_t>(n), -1);
  long remaining = n;
  double best = std::numeric_limits<double>::infinity();
  for (long t = 0;; ++t) {
    const Vector err = column_errors(Y, n, factor, targets);
    double worst_open = 0;
    for (Index c = 0; c < n; ++c) {
      if (hit[c] >= 0) continue;
      worst_open = std::max(worst_open, err[c]);
      if (err[c] <= eps) {
        hit[c] = t;
        --remaining;
      }
    }
    r.error_trace.push_back(worst_open);
    best = std::min(best, err.maxCoeff());
    if (r.sum_conserved_checked)
      r.sum_drift = std::max(r.sum_drift, ((Y.colwise().sum() - sum0).cwiseQuotient(sum0)).cwiseAbs().maxCoeff());
    if (remaining == 0) break;
    if (t >= step_cap) throw StepCapExceeded(step_cap, best);
    Y = lc.chain.P() * Y;
  }
  r.T_eps = *std::max_element(hit.begin(), hit.end());
  r.total_cost = r.T_eps * r.ops_per_iter;
  return r;
}

RunningBoundReport check_running_mixing_bound(const LiftedChain& lc, double eps) {
  RunningBoundReport r;
  r.epsilon = eps;
  const double pi0 = lc.origin.pi_min();
  MixingOptions opts;
  opts.starts = lc.original_states();
  opts.chi2 = false;
  opts.spectral_bound = false;
  r.tau = tv_mixing_time(lc.chain, eps * pi0 / 4.0, opts).tau_tv;
  r.T_eps = worst_case(lc, eps).T_eps;
  r.ratio = r.tau > 0 ? static_cast<double>(r.T_eps) / static_cast<double>(r.tau)
                      : (r.T_eps == 0 ? 1.0 : std::numeric_limits<double>::infinity());

  const double factor = estimate_factor(lc);
  const Index n = lc.num_original();
  Matrix Y = Matrix::Zero(lc.chain.size(), n);
  Y.topRows(n).setOnes();
  Y.topRows(n).diagonal().array() += 1.0;
  for (long t = 0; t < r.tau; ++t) Y = lc.chain.P() * Y;
  const Vector targets = lc.origin.pi().array() + 1.0;
  r.error_at_tau = column_errors(Y, n, factor, targets).maxCoeff();
  r.holds = r.error_at_tau <= eps && r.T_eps <= r.tau;
  return r;
}

}  // namespace liftedmix
