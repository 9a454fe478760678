#pragma once

#include <vector>

#include "liftedmix/types.hpp"

namespace liftedmix::lp {

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

/// Dense revised simplex for  min c^T x  s.t.  A x = b, x >= 0,  with b >= 0.
/// Columns may be appended between solves; a later solve() restarts from the
/// previous basis, which stays primal feasible, so column generation only pays
/// for the pivots the new columns trigger.
class RevisedSimplex {
 public:
  explicit RevisedSimplex(Vector b);

  int add_column(const Vector& a, double cost);
  int num_rows() const noexcept { return static_cast<int>(b_.size()); }
  int num_columns() const noexcept { return static_cast<int>(cols_.size()); }

  Status solve(int max_iterations = 200000);

  /// Values of the structural columns after an optimal solve.
  Vector primal() const;
  /// Row duals y with reduced cost c_j - y^T a_j.
  const Vector& duals() const noexcept { return y_; }
  double objective() const;

 private:
  enum class Phase { One, Two };
  Status iterate(Phase phase, int max_iterations);
  void refactor();
  double cost_of(int basic, Phase phase) const;
  Vector column(int basic) const;
  void compute_duals(Phase phase);

  Vector b_;
  std::vector<Vector> cols_;
  std::vector<double> cost_;
  // Basis entries >= 0 are structural columns; -(r+1) is the artificial of row r.
  std::vector<int> basis_;
  std::vector<char> in_basis_;
  Matrix binv_;
  Vector xb_;
  Vector y_;
  bool started_ = false;
};

}  // namespace liftedmix::lp
