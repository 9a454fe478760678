#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <stdexcept>
#include <string>
#include <vector>

namespace liftedmix {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Triplet = Eigen::Triplet<double>;

/// Tolerance for identities that hold in exact arithmetic.
inline constexpr double kExactTol = 1e-12;
/// Tolerance for quantities that come out of a linear solve.
inline constexpr double kSolveTol = 1e-10;

class DisconnectedGraphError : public std::invalid_argument {
 public:
  DisconnectedGraphError(const std::string& what, std::vector<int> component)
      : std::invalid_argument(what), component_(std::move(component)) {}
  /// Nodes of the first component that is not reachable from node 0.
  const std::vector<int>& component() const noexcept { return component_; }

 private:
  std::vector<int> component_;
};

class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class HypothesisViolation : public std::invalid_argument {
 public:
  HypothesisViolation(const std::string& constraint, double worst)
      : std::invalid_argument("hypothesis violated: " + constraint),
        constraint_(constraint),
        worst_(worst) {}
  const std::string& constraint() const noexcept { return constraint_; }
  double worst() const noexcept { return worst_; }

 private:
  std::string constraint_;
  double worst_;
};

class CongestionError : public std::runtime_error {
 public:
  CongestionError(int from, int to, double residual)
      : std::runtime_error("flow exceeds edge capacity on (" + std::to_string(from) + "," +
                           std::to_string(to) + "), residual " + std::to_string(residual)),
        from_(from),
        to_(to),
        residual_(residual) {}
  int from() const noexcept { return from_; }
  int to() const noexcept { return to_; }
  double residual() const noexcept { return residual_; }

 private:
  int from_, to_;
  double residual_;
};

class StepCapExceeded : public std::runtime_error {
 public:
  StepCapExceeded(long cap, double best)
      : std::runtime_error("step cap of " + std::to_string(cap) +
                           " exceeded; best error " + std::to_string(best)),
        best_(best) {}
  double best_error() const noexcept { return best_; }

 private:
  double best_;
};

class CertificationError : public std::runtime_error {
 public:
  CertificationError(const std::string& what, double best_gap)
      : std::runtime_error(what), best_gap_(best_gap) {}
  double best_gap() const noexcept { return best_gap_; }

 private:
  double best_gap_;
};

}  // namespace liftedmix
