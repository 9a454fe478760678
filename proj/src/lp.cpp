#include "liftedmix/lp.hpp"

#include <Eigen/LU>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace liftedmix::lp {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-11;
constexpr double kFeasTol = 1e-9;
constexpr int kRefactorEvery = 64;
constexpr int kDegenerateStreak = 50;

}  // namespace

RevisedSimplex::RevisedSimplex(Vector b) : b_(std::move(b)) {
  if (b_.size() == 0) throw std::invalid_argument("LP needs at least one row");
  if (b_.minCoeff() < 0) throw std::invalid_argument("LP right-hand side must be non-negative");
  y_ = Vector::Zero(b_.size());
}

int RevisedSimplex::add_column(const Vector& a, double cost) {
  if (a.size() != b_.size()) throw std::invalid_argument("column has the wrong number of rows");
  cols_.push_back(a);
  cost_.push_back(cost);
  in_basis_.push_back(0);
  return num_columns() - 1;
}

Vector RevisedSimplex::column(int basic) const {
  if (basic >= 0) return cols_[basic];
  return Vector::Unit(b_.size(), -basic - 1);
}

double RevisedSimplex::cost_of(int basic, Phase phase) const {
  if (phase == Phase::One) return basic < 0 ? 1.0 : 0.0;
  return basic < 0 ? 0.0 : cost_[basic];
}

void RevisedSimplex::refactor() {
  const Index m = b_.size();
  Matrix B(m, m);
  for (Index r = 0; r < m; ++r) B.col(r) = column(basis_[r]);
  Eigen::PartialPivLU<Matrix> lu(B);
  binv_ = lu.inverse();
  xb_ = binv_ * b_;
  for (Index r = 0; r < m; ++r)
    if (xb_[r] < 0 && xb_[r] > -kFeasTol) xb_[r] = 0;
}

void RevisedSimplex::compute_duals(Phase phase) {
  const Index m = b_.size();
  Vector cb(m);
  for (Index r = 0; r < m; ++r) cb[r] = cost_of(basis_[r], phase);
  y_ = binv_.transpose() * cb;
}

Status RevisedSimplex::iterate(Phase phase, int max_iterations) {
  const Index m = b_.size();
  int degenerate = 0;
  for (int iter = 0; iter < max_iterations; ++iter) {
    if (iter > 0 && iter % kRefactorEvery == 0) refactor();
    compute_duals(phase);
    const bool bland = degenerate >= kDegenerateStreak;
    int entering = -1;
    double best = -kCostTol;
    for (int j = 0; j < num_columns(); ++j) {
      if (in_basis_[j]) continue;
      const double c = phase == Phase::One ? 0.0 : cost_[j];
      const double d = c - y_.dot(cols_[j]);
      if (d < best) {
        entering = j;
        if (bland) break;
        best = d;
      }
    }
    if (entering < 0) return Status::Optimal;

    const Vector alpha = binv_ * cols_[entering];
    int leave = -1;
    double ratio = std::numeric_limits<double>::infinity();
    bool forced = false;
    if (phase == Phase::Two) {
      // Artificials sit at zero in phase two; push them out first.
      for (Index r = 0; r < m && !forced; ++r)
        if (basis_[r] < 0 && std::abs(alpha[r]) > kPivotTol) {
          leave = static_cast<int>(r);
          ratio = 0;
          forced = true;
        }
    }
    for (Index r = 0; r < m && !forced; ++r) {
      if (alpha[r] <= kPivotTol || (basis_[r] < 0 && phase == Phase::Two)) continue;
      const double q = std::max(xb_[r], 0.0) / alpha[r];
      const bool tie = leave >= 0 && std::abs(q - ratio) <= 1e-15;
      if (q < ratio - 1e-15 ||
          (tie && (bland ? basis_[r] < basis_[leave] : alpha[r] > alpha[leave]))) {
        ratio = q;
        leave = static_cast<int>(r);
      }
    }
    if (leave < 0) return Status::Unbounded;
    degenerate = ratio <= 1e-14 ? degenerate + 1 : 0;

    const double piv = alpha[leave];
    const double theta = std::max(xb_[leave], 0.0) / piv;
    binv_.row(leave) /= piv;
    for (Index r = 0; r < m; ++r) {
      if (r == leave || alpha[r] == 0) continue;
      binv_.row(r) -= alpha[r] * binv_.row(leave);
      xb_[r] -= alpha[r] * theta;
      if (xb_[r] < 0 && xb_[r] > -kFeasTol) xb_[r] = 0;
    }
    xb_[leave] = theta;
    if (basis_[leave] >= 0) in_basis_[basis_[leave]] = 0;
    basis_[leave] = entering;
    in_basis_[entering] = 1;
  }
  return Status::IterationLimit;
}

Status RevisedSimplex::solve(int max_iterations) {
  const Index m = b_.size();
  if (!started_) {
    basis_.resize(m);
    for (Index r = 0; r < m; ++r) basis_[r] = -static_cast<int>(r) - 1;
    binv_ = Matrix::Identity(m, m);
    xb_ = b_;
    started_ = true;
  } else {
    refactor();
  }

  double infeasibility = 0;
  for (Index r = 0; r < m; ++r)
    if (basis_[r] < 0) infeasibility += xb_[r];
  if (infeasibility > kFeasTol) {
    Status s = iterate(Phase::One, max_iterations);
    if (s == Status::IterationLimit) return s;
    refactor();
    infeasibility = 0;
    for (Index r = 0; r < m; ++r)
      if (basis_[r] < 0) infeasibility += xb_[r];
    if (infeasibility > kFeasTol * std::max(1.0, b_.lpNorm<Eigen::Infinity>())) return Status::Infeasible;
  }
  Status s = iterate(Phase::Two, max_iterations);
  if (s == Status::Optimal) {
    refactor();
    compute_duals(Phase::Two);
  }
  return s;
}

Vector RevisedSimplex::primal() const {
  Vector x = Vector::Zero(num_columns());
  for (std::size_t r = 0; r < basis_.size(); ++r)
    if (basis_[r] >= 0) x[basis_[r]] = std::max(xb_[static_cast<Index>(r)], 0.0);
  return x;
}

double RevisedSimplex::objective() const {
  double z = 0;
  for (std::size_t r = 0; r < basis_.size(); ++r)
    if (basis_[r] >= 0) z += cost_[basis_[r]] * std::max(xb_[static_cast<Index>(r)], 0.0);
  return z;
}

}  // namespace liftedmix::lp
