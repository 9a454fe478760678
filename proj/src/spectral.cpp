#include <Eigen/Eigenvalues>

#include <algorithm>

#include "liftedmix/chain.hpp"

namespace liftedmix {

namespace {

// A = D^{1/2} P D^{-1/2}, D = diag(pi). Its top singular pair is sqrt(pi).
SparseMatrix similarity_transform(const Chain& c) {
  SparseMatrix A = c.P();
  Vector s = c.pi().cwiseSqrt();
  for (Index i = 0; i < A.outerSize(); ++i)
    for (SparseMatrix::InnerIterator it(A, i); it; ++it) it.valueRef() *= s[i] / s[it.col()];
  return A;
}

// Largest eigenvalue of a PSD operator restricted to the complement of u.
template <typename Apply>
double deflated_top_eigenvalue(Index n, const Vector& u, Apply apply) {
  constexpr int kMaxIter = 20000;
  constexpr double kTol = 1e-9;
  Vector v = Vector::LinSpaced(n, 1.0, 2.0);
  v -= u.dot(v) * u;
  v.normalize();
  double theta = 0, residual = 1;
  for (int iter = 0; iter < kMaxIter; ++iter) {
    Vector w = apply(v);
    w -= u.dot(w) * u;
    theta = v.dot(w);
    residual = (w - theta * v).norm();
    if (residual <= kTol) return theta;
    double norm = w.norm();
    if (norm == 0) return 0;
    v = w / norm;
  }
  throw NonConvergenceError("power iteration did not converge", residual);
}

}  // namespace

std::optional<long> SpectralReport::tau2_upper(double eps) const {
  if (multiplicative_gap <= 0) return std::nullopt;
  return static_cast<long>(std::ceil(2.0 / multiplicative_gap * std::log(1.0 / (eps * std::sqrt(pi_min)))));
}

SpectralReport spectral(const Chain& c) {
  SpectralReport r;
  const Index n = c.size();
  r.pi_min = c.pi_min();
  r.reversible = c.is_reversible();
  if (n == 1) {
    r.gap = 1.0;
    r.multiplicative_gap = 1.0;
    return r;
  }
  SparseMatrix A = similarity_transform(c);
  if (n <= kDenseSpectralLimit) {
    Matrix Ad = to_dense(A);
    Matrix M = Ad * Ad.transpose();
    Eigen::SelfAdjointEigenSolver<Matrix> mes(0.5 * (M + M.transpose()), Eigen::EigenvaluesOnly);
    r.multiplicative_gap = std::clamp(1.0 - mes.eigenvalues()[n - 2], 0.0, 1.0);
    if (r.reversible) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (Ad + Ad.transpose()), Eigen::EigenvaluesOnly);
      const auto& ev = es.eigenvalues();
      r.gap = std::clamp(1.0 - std::max(std::abs(ev[n - 2]), std::abs(ev[0])), 0.0, 1.0);
    }
    return r;
  }
  r.iterative = true;
  Vector u = c.pi().cwiseSqrt();
  SparseMatrix At = A.transpose();
  double top = deflated_top_eigenvalue(n, u, [&](const Vector& v) -> Vector { return A * (At * v); });
  r.multiplicative_gap = std::clamp(1.0 - top, 0.0, 1.0);
  if (r.reversible) {
    // A is symmetric here, so A^2 = A A^T and the same top value is max |lambda|^2.
    r.gap = std::clamp(1.0 - std::sqrt(std::max(top, 0.0)), 0.0, 1.0);
  }
  return r;
}

double additive_gap(const Chain& c) {
  const Index n = c.size();
  if (n == 1) return 1.0;
  if (n > kDenseSpectralLimit) throw std::invalid_argument("additive_gap is dense-only");
  Matrix A = to_dense(similarity_transform(c));
  Matrix S = 0.5 * (A + A.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(S, Eigen::EigenvaluesOnly);
  return std::clamp(1.0 - es.eigenvalues()[n - 2], 0.0, 2.0);
}

MinorizationReport spectral_minorization_check(const Chain& c1, const Chain& c2, double alpha,
                                               double beta, double c, double d) {
  if (c1.size() != c2.size()) throw std::invalid_argument("chains must share a state space");
  if (alpha <= 0 || beta <= 0 || c <= 0 || d <= 0)
    throw std::invalid_argument("alpha, beta, c, d must be positive");
  const Index n = c1.size();
  if (!c2.is_reversible()) throw HypothesisViolation("P2 reversible", 0);
  Matrix P1 = to_dense(c1.P()), P2 = to_dense(c2.P());
  double worst = (P1 - alpha * P2).minCoeff();
  if (worst < -kExactTol) throw HypothesisViolation("P1 >= alpha P2 entrywise", worst);
  for (Index i = 0; i < n; ++i)
    if (P1(i, i) < beta - kExactTol) throw HypothesisViolation("P1 >= beta I", P1(i, i) - beta);
  const Vector& pi1 = c1.pi();
  const Vector& pi2 = c2.pi();
  for (Index i = 0; i < n; ++i) {
    if (pi1[i] < c * pi2[i] * (1 - kSolveTol)) throw HypothesisViolation("c pi2 <= pi1", pi1[i] - c * pi2[i]);
    if (pi1[i] > d * pi2[i] * (1 + kSolveTol)) throw HypothesisViolation("pi1 <= d pi2", d * pi2[i] - pi1[i]);
  }

  MinorizationReport r;
  SpectralReport s1 = spectral(c1);
  SpectralReport s2 = spectral(c2);
  r.lambda_p1p1star = s1.multiplicative_gap;
  r.lambda_p2 = *s2.gap;
  r.bound_a2 = std::min(alpha * beta * c / (d * d) * r.lambda_p2, 2 * beta * beta);
  r.a2_holds = r.lambda_p1p1star >= r.bound_a2 - kSolveTol;
  r.p1_reversible = s1.reversible;
  if (s1.reversible) {
    r.lambda_p1 = *s1.gap;
    r.bound_a1 = std::min(alpha * c / (d * d) * r.lambda_p2, 2 * beta);
    r.a1_holds = *r.lambda_p1 >= *r.bound_a1 - kSolveTol;
  }
  return r;
}

}  // namespace liftedmix
