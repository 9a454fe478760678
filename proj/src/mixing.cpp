#include <Eigen/SparseLU>

#include <algorithm>
#include <numeric>

#include "liftedmix/chain.hpp"

namespace liftedmix {

namespace {

std::vector<Index> support_bfs(const SparseMatrix& P, Index src) {
  std::vector<Index> dist(P.rows(), -1), queue{src};
  dist[src] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    Index u = queue[head];
    for (SparseMatrix::InnerIterator it(P, u); it; ++it) {
      if (it.value() != 0 && dist[it.col()] < 0) {
        dist[it.col()] = dist[u] + 1;
        queue.push_back(it.col());
      }
    }
  }
  return dist;
}

Index farthest(const std::vector<Index>& dist) {
  return static_cast<Index>(std::max_element(dist.begin(), dist.end()) - dist.begin());
}

}  // namespace

std::vector<Index> default_sampled_starts(const Chain& c, std::vector<Index> base) {
  Index origin = base.empty() ? 0 : base.front();
  Index a = farthest(support_bfs(c.P(), origin));
  Index b = farthest(support_bfs(c.P(), a));
  for (Index s : {a, b})
    if (std::find(base.begin(), base.end(), s) == base.end()) base.push_back(s);
  if (base.empty()) base.push_back(0);
  return base;
}

MixingReport tv_mixing_time(const Chain& c, double eps, const MixingOptions& opts) {
  if (!(eps > 0 && eps < 1)) throw std::invalid_argument("eps must lie in (0,1)");
  const Index n = c.size();
  MixingReport report;
  report.epsilon = eps;

  std::vector<Index> starts = opts.starts;
  if (starts.empty()) {
    if (n <= kExactMixingLimit) {
      starts.resize(n);
      std::iota(starts.begin(), starts.end(), Index{0});
      report.start_mode = StartMode::ExactAllStarts;
    } else {
      starts = default_sampled_starts(c, {});
      report.start_mode = StartMode::SampledStarts;
    }
  } else {
    report.start_mode = static_cast<Index>(starts.size()) == n ? StartMode::ExactAllStarts
                                                              : StartMode::SampledStarts;
  }
  if (report.start_mode == StartMode::SampledStarts) report.starts = starts;

  const Vector& pi = c.pi();
  const SparseMatrix& P = c.P();
  const Index k = static_cast<Index>(starts.size());
  using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  RowMatrix M = RowMatrix::Zero(k, n), next(k, n);
  for (Index r = 0; r < k; ++r) M(r, starts[r]) = 1.0;
  std::vector<Index> active(k);
  std::iota(active.begin(), active.end(), Index{0});
  std::vector<long> tv_hit(k, -1), chi_hit(k, -1);
  const Eigen::RowVectorXd pi_row = pi.transpose();
  const Eigen::RowVectorXd inv_pi = pi.cwiseInverse().transpose();

  for (long t = 0;; ++t) {
    double worst_tv = 0;
    std::vector<Index> still;
    still.reserve(active.size());
    for (Index r : active) {
      auto row = M.row(r);
      double tv = 0.5 * (row - pi_row).cwiseAbs().sum();
      worst_tv = std::max(worst_tv, tv);
      if (tv_hit[r] < 0 && tv <= eps) tv_hit[r] = t;
      if (opts.chi2 && chi_hit[r] < 0) {
        double chi = std::sqrt((row - pi_row).array().square().matrix().dot(inv_pi));
        if (chi <= eps) chi_hit[r] = t;
      }
      bool done = tv_hit[r] >= 0 && (!opts.chi2 || chi_hit[r] >= 0);
      if (!done) still.push_back(r);
    }
    if (report.distance_trace.size() == static_cast<std::size_t>(t) &&
        (t == 0 || report.distance_trace.back() > eps))
      report.distance_trace.push_back(worst_tv);
    active.swap(still);
    if (active.empty()) break;
    if (t >= opts.max_steps) throw StepCapExceeded(opts.max_steps, worst_tv);
    for (Index r : active) {
      next.row(r).setZero();
      for (Index i = 0; i < n; ++i) {
        const double m = M(r, i);
        if (m == 0) continue;
        for (SparseMatrix::InnerIterator it(P, i); it; ++it) next(r, it.col()) += m * it.value();
      }
    }
    for (Index r : active) M.row(r) = next.row(r);
  }
  report.tau_tv = *std::max_element(tv_hit.begin(), tv_hit.end());
  if (opts.chi2) report.tau_chi2 = *std::max_element(chi_hit.begin(), chi_hit.end());
  if (opts.spectral_bound) {
    try {
      report.spectral_upper = spectral(c).tau2_upper(eps);
    } catch (const NonConvergenceError&) {
      report.spectral_upper.reset();
    }
  }
  return report;
}

Chain induced_chain(const Chain& c, const std::vector<Index>& observed) {
  const Index n = c.size();
  std::vector<Index> local(n, -1);
  for (std::size_t a = 0; a < observed.size(); ++a) {
    if (observed[a] < 0 || observed[a] >= n || local[observed[a]] >= 0)
      throw std::invalid_argument("observed set must hold distinct valid states");
    local[observed[a]] = static_cast<Index>(a);
  }
  const Index m = static_cast<Index>(observed.size());
  std::vector<Index> hidden;
  std::vector<Index> hidden_local(n, -1);
  for (Index i = 0; i < n; ++i)
    if (local[i] < 0) {
      hidden_local[i] = static_cast<Index>(hidden.size());
      hidden.push_back(i);
    }
  const Index h = static_cast<Index>(hidden.size());
  const SparseMatrix& P = c.P();

  Matrix result = Matrix::Zero(m, m);
  for (Index a = 0; a < m; ++a)
    for (SparseMatrix::InnerIterator it(P, observed[a]); it; ++it)
      if (local[it.col()] >= 0) result(a, local[it.col()]) += it.value();

  if (h > 0) {
    // Every hidden state must reach the observed set, otherwise I - P_hh is singular.
    std::vector<std::vector<Index>> preds(n);
    for (Index i = 0; i < n; ++i)
      for (SparseMatrix::InnerIterator it(P, i); it; ++it)
        if (it.value() != 0) preds[it.col()].push_back(i);
    std::vector<char> reaches(n, 0);
    std::vector<Index> queue(observed.begin(), observed.end());
    for (Index o : observed) reaches[o] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head)
      for (Index p : preds[queue[head]])
        if (!reaches[p]) {
          reaches[p] = 1;
          queue.push_back(p);
        }
    for (Index i : hidden)
      if (!reaches[i])
        throw std::runtime_error("state " + std::to_string(i) + " never reaches the observed set");

    std::vector<Triplet> hh, ho, oh;
    for (Index i : hidden) {
      hh.emplace_back(hidden_local[i], hidden_local[i], 1.0);
      for (SparseMatrix::InnerIterator it(P, i); it; ++it) {
        if (local[it.col()] >= 0) ho.emplace_back(hidden_local[i], local[it.col()], it.value());
        else hh.emplace_back(hidden_local[i], hidden_local[it.col()], -it.value());
      }
    }
    for (Index a = 0; a < m; ++a)
      for (SparseMatrix::InnerIterator it(P, observed[a]); it; ++it)
        if (local[it.col()] < 0) oh.emplace_back(a, hidden_local[it.col()], it.value());
    Eigen::SparseMatrix<double> Ahh(h, h), Bho(h, m), Coh(m, h);
    Ahh.setFromTriplets(hh.begin(), hh.end());
    Bho.setFromTriplets(ho.begin(), ho.end());
    Coh.setFromTriplets(oh.begin(), oh.end());
    Ahh.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(Ahh);
    if (lu.info() != Eigen::Success) throw std::runtime_error("absorption system is singular");
    Matrix X = lu.solve(Matrix(Bho));
    result += Coh * X;
  }

  std::vector<Triplet> t;
  for (Index a = 0; a < m; ++a) {
    double s = result.row(a).sum();
    for (Index b = 0; b < m; ++b)
      if (result(a, b) > 1e-16) t.emplace_back(a, b, result(a, b) / s);
  }
  SparseMatrix Pv(m, m);
  Pv.setFromTriplets(t.begin(), t.end());
  Vector pi(m);
  for (Index a = 0; a < m; ++a) pi[a] = c.pi()[observed[a]];
  pi /= pi.sum();
  std::shared_ptr<const Graph> graph;
  if (c.graph() && m == n) graph = c.graph();
  return Chain::from_transition(std::move(Pv), std::move(pi), graph);
}

}  // namespace liftedmix
