#include "liftedmix/chain.hpp"

#include <Eigen/SparseLU>

#include <algorithm>
#include <sstream>

namespace liftedmix {

namespace {

double max_row_sum_residual(const SparseMatrix& P) {
  double worst = 0;
  for (Index i = 0; i < P.outerSize(); ++i) {
    double s = 0;
    for (SparseMatrix::InnerIterator it(P, i); it; ++it) s += it.value();
    worst = std::max(worst, std::abs(s - 1.0));
  }
  return worst;
}

}  // namespace

Chain::Chain(SparseMatrix P, Vector pi, std::shared_ptr<const Graph> graph)
    : P_(std::move(P)), pi_(std::move(pi)), graph_(std::move(graph)) {
  P_.makeCompressed();
  if (P_.rows() != P_.cols() || P_.rows() != pi_.size())
    throw std::invalid_argument("transition matrix and distribution sizes disagree");
  if (graph_ && graph_->num_nodes() != P_.rows())
    throw std::invalid_argument("graph size does not match chain size");
  if (double r = max_row_sum_residual(P_); r > kExactTol)
    throw std::invalid_argument("rows of P must sum to 1 (residual " + std::to_string(r) + ")");
  if (pi_.size() > 0 && pi_.minCoeff() <= 0)
    throw std::invalid_argument("stationary distribution must be strictly positive");
}

Chain Chain::from_transition(SparseMatrix P, std::shared_ptr<const Graph> graph) {
  Vector pi = stationary_distribution(P);
  return Chain(std::move(P), std::move(pi), std::move(graph));
}

Chain Chain::from_transition(SparseMatrix P, Vector pi, std::shared_ptr<const Graph> graph) {
  Chain c(std::move(P), std::move(pi), std::move(graph));
  Vector residual = c.P_.transpose() * c.pi_ - c.pi_;
  if (residual.lpNorm<Eigen::Infinity>() > kSolveTol)
    throw std::invalid_argument("supplied distribution is not stationary for P");
  return c;
}

Chain Chain::from_flow(const SparseMatrix& Q, std::shared_ptr<const Graph> graph) {
  const Index n = Q.rows();
  Vector pi = Vector::Zero(n);
  for (Index i = 0; i < n; ++i)
    for (SparseMatrix::InnerIterator it(Q, i); it; ++it) pi[i] += it.value();
  if (n > 0 && pi.minCoeff() <= 0) throw std::invalid_argument("ergodic flow has a state with no mass");
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(Q.nonZeros()));
  for (Index i = 0; i < n; ++i)
    for (SparseMatrix::InnerIterator it(Q, i); it; ++it)
      if (it.value() != 0) t.emplace_back(i, it.col(), it.value() / pi[i]);
  SparseMatrix P(n, n);
  P.setFromTriplets(t.begin(), t.end());
  return Chain(std::move(P), std::move(pi), std::move(graph));
}

SparseMatrix Chain::ergodic_flow() const {
  SparseMatrix Q = P_;
  for (Index i = 0; i < Q.outerSize(); ++i)
    for (SparseMatrix::InnerIterator it(Q, i); it; ++it) it.valueRef() *= pi_[i];
  return Q;
}

Index Chain::nnz() const {
  Index count = 0;
  for (Index i = 0; i < P_.outerSize(); ++i)
    for (SparseMatrix::InnerIterator it(P_, i); it; ++it)
      if (it.col() != i && it.value() != 0) ++count;
  return count;
}

bool Chain::is_reversible(double tol) const {
  SparseMatrix Q = ergodic_flow();
  SparseMatrix Qt = Q.transpose();
  SparseMatrix diff = Q - Qt;
  double worst = 0;
  for (Index i = 0; i < diff.outerSize(); ++i)
    for (SparseMatrix::InnerIterator it(diff, i); it; ++it) worst = std::max(worst, std::abs(it.value()));
  return worst <= tol;
}

ChainCheck validate(const Chain& c) {
  ChainCheck check;
  const auto& P = c.P();
  const auto& pi = c.pi();
  check.row_sum_residual = max_row_sum_residual(P);
  check.stationarity_residual = (P.transpose() * pi - pi).lpNorm<Eigen::Infinity>();
  SparseMatrix Q = c.ergodic_flow();
  Vector rows = Vector::Zero(c.size()), cols = Vector::Zero(c.size());
  for (Index i = 0; i < Q.outerSize(); ++i) {
    for (SparseMatrix::InnerIterator it(Q, i); it; ++it) {
      rows[i] += it.value();
      cols[it.col()] += it.value();
      if (P.coeff(i, it.col()) < 0) check.negative_entry = std::max(check.negative_entry, -P.coeff(i, it.col()));
      if (c.graph() && it.value() != 0 && !c.graph()->conformant(static_cast<int>(i), static_cast<int>(it.col())))
        ++check.conformance_violations;
    }
  }
  check.flow_total_residual = std::abs(Q.sum() - 1.0);
  check.flow_balance_residual =
      std::max((rows - pi).lpNorm<Eigen::Infinity>(), (cols - pi).lpNorm<Eigen::Infinity>());
  return check;
}

Vector stationary_distribution(const SparseMatrix& P) {
  const Index n = P.rows();
  if (n == 1) return Vector::Ones(1);
  // (P^T - I) pi = 0 with the last equation replaced by sum(pi) = 1.
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(P.nonZeros() + 2 * n));
  for (Index i = 0; i < n; ++i) {
    for (SparseMatrix::InnerIterator it(P, i); it; ++it)
      if (it.col() != n - 1) t.emplace_back(it.col(), i, it.value());
  }
  for (Index i = 0; i < n - 1; ++i) t.emplace_back(i, i, -1.0);
  for (Index j = 0; j < n; ++j) t.emplace_back(n - 1, j, 1.0);
  Eigen::SparseMatrix<double> A(n, n);
  A.setFromTriplets(t.begin(), t.end());
  A.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw std::invalid_argument("chain is reducible: stationary system is singular");
  Vector rhs = Vector::Zero(n);
  rhs[n - 1] = 1.0;
  Vector pi = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !pi.allFinite())
    throw std::invalid_argument("stationary solve failed");
  if (pi.minCoeff() <= 0) throw std::invalid_argument("chain is reducible: stationary mass vanishes on some state");
  return pi / pi.sum();
}

Vector uniform_distribution(Index n) { return Vector::Constant(n, 1.0 / static_cast<double>(n)); }

Chain metropolis_hastings(std::shared_ptr<const Graph> g, const Vector& pi_in) {
  const int n = g->num_nodes();
  if (pi_in.size() != n) throw std::invalid_argument("distribution size does not match graph");
  if (pi_in.minCoeff() <= 0) throw std::invalid_argument("Metropolis-Hastings needs strictly positive pi");
  if (std::abs(pi_in.sum() - 1.0) > 1e-9) throw std::invalid_argument("pi must sum to 1");
  Vector pi = pi_in / pi_in.sum();
  std::vector<Triplet> t;
  if (n == 1) {
    t.emplace_back(0, 0, 1.0);
  } else {
    const double d = g->max_degree();
    for (int i = 0; i < n; ++i) {
      double off = 0;
      for (int j : g->neighbors(i)) {
        double p = std::min(pi[j] / pi[i], 1.0) / (2.0 * d);
        off += p;
        t.emplace_back(i, j, p);
      }
      t.emplace_back(i, i, 1.0 - off);
    }
  }
  SparseMatrix P(n, n);
  P.setFromTriplets(t.begin(), t.end());
  return Chain::from_transition(std::move(P), std::move(pi), std::move(g));
}

Chain metropolis_hastings(const Graph& g, const Vector& pi) {
  return metropolis_hastings(std::make_shared<const Graph>(g), pi);
}

Chain uniform_neighbor_walk(const Graph& g) {
  const int n = g.num_nodes();
  auto graph = std::make_shared<const Graph>(g);
  if (n == 1) return identity_chain(1);
  std::vector<Triplet> t;
  Vector pi(n);
  for (int i = 0; i < n; ++i) {
    const double deg = g.degree(i);
    for (int j : g.neighbors(i)) t.emplace_back(i, j, 1.0 / deg);
    pi[i] = deg;
  }
  pi /= pi.sum();
  SparseMatrix P(n, n);
  P.setFromTriplets(t.begin(), t.end());
  return Chain::from_transition(std::move(P), std::move(pi), std::move(graph));
}

Chain complete_chain(int n) {
  auto g = std::make_shared<const Graph>(gen::complete(n));
  std::vector<Triplet> t;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t.emplace_back(i, j, 1.0 / n);
  SparseMatrix P(n, n);
  P.setFromTriplets(t.begin(), t.end());
  return Chain::from_transition(std::move(P), uniform_distribution(n), std::move(g));
}

Chain identity_chain(int n) {
  SparseMatrix P(n, n);
  P.setIdentity();
  return Chain::from_transition(std::move(P), uniform_distribution(n), nullptr);
}

Chain lazy(const Chain& c) {
  SparseMatrix I(c.size(), c.size());
  I.setIdentity();
  SparseMatrix P = 0.5 * (I + c.P());
  return Chain::from_transition(std::move(P), c.pi(), c.graph());
}

Chain reverse(const Chain& c) {
  const auto& pi = c.pi();
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(c.P().nonZeros()));
  for (Index i = 0; i < c.size(); ++i)
    for (SparseMatrix::InnerIterator it(c.P(), i); it; ++it)
      t.emplace_back(it.col(), i, pi[i] * it.value() / pi[it.col()]);
  SparseMatrix Ps(c.size(), c.size());
  Ps.setFromTriplets(t.begin(), t.end());
  // Row sums of P* equal colsum(Q)/pi, so stationarity of pi is what makes
  // them 1; renormalize away the rounding.
  for (Index i = 0; i < Ps.outerSize(); ++i) {
    double s = 0;
    for (SparseMatrix::InnerIterator it(Ps, i); it; ++it) s += it.value();
    for (SparseMatrix::InnerIterator it(Ps, i); it; ++it) it.valueRef() /= s;
  }
  return Chain::from_transition(std::move(Ps), pi, c.graph());
}

Matrix to_dense(const SparseMatrix& m) { return Matrix(m); }

}  // namespace liftedmix
