#pragma once

#include <vector>

#include "liftedmix/lifting.hpp"

namespace liftedmix {

/// Values y over the lifted states; the copy of node v is hosted by f(v).
struct AveragingState {
  const LiftedChain* lift = nullptr;
  Vector x;
  Vector y;
  long t = 0;
};

/// y(0) = x on the copies of V(G), 0 on added states. Throws unless x > 0 and
/// the lift is an identity lift or a pseudo-lifting.
AveragingState init_state(const LiftedChain& lc, const Vector& x);
/// The state keeps a pointer to the lift, so temporaries are refused.
AveragingState init_state(const LiftedChain&& lc, const Vector& x) = delete;

/// y(t+1) = P_hat y(t).
void step(AveragingState& s);

/// 2 y on V(G) for pseudo-lifts, y itself for identity lifts.
Vector estimates(const AveragingState& s);

/// Value every estimate converges to: <x, pi>, which is x_ave for uniform pi.
double averaging_target(const LiftedChain& lc, const Vector& x);

enum class AveragingMode { Given, WorstCase };

inline constexpr long kDefaultStepCap = 10'000'000;

struct RunReport {
  double epsilon = 0;
  long T_eps = 0;
  long ops_per_iter = 0;
  long total_cost = 0;
  AveragingMode mode = AveragingMode::Given;
  bool uniform_target = true;         // target is x_ave rather than <x, pi>
  bool sum_conserved_checked = false;  // only for doubly stochastic P_hat
  double sum_drift = 0;
  std::vector<double> error_trace;     // max relative error at t = 0..T_eps
};

/// Iterates until max_v |estimate_v - target| / target <= eps.
RunReport run_until(AveragingState& s, double eps, long step_cap = kDefaultStepCap);

/// Max of T_eps over the probes x = 1 + e_i, all run together.
RunReport worst_case(const LiftedChain& lc, double eps, long step_cap = kDefaultStepCap);

struct RunningBoundReport {
  double epsilon = 0;
  long T_eps = 0;
  long tau = 0;          // tau(eps pi0 / 4) over the original starts
  double ratio = 0;      // T_eps / tau
  double error_at_tau = 0;  // worst relative probe error at t = tau
  bool holds = false;    // error_at_tau <= eps
};

/// Evolves the probes to t = tau(eps pi0 / 4) and checks the error is at most eps.
RunningBoundReport check_running_mixing_bound(const LiftedChain& lc, double eps);

}  // namespace liftedmix
