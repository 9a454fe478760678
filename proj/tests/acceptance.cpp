// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "liftedmix/averaging.hpp"
#include "liftedmix/experiment.hpp"
#include "oracles.hpp"

using namespace liftedmix;

namespace {

// Pinned tolerances and bands.
constexpr double kMixEps = 0.25;
constexpr double kMhSlopeLo = 1.7, kMhSlopeHi = 2.3;
constexpr double kLiftSlopeLo = 0.7, kLiftSlopeHi = 1.3;
constexpr double kRingBudgetSeconds = 300;
constexpr double kMassTol = 1e-10;
constexpr long kStoppingTrials = 1'000'000;
constexpr double kStoppingTvTol = 0.01;
constexpr double kStoppingSlopeTol = 0.3;
constexpr double kStoppingBudgetSeconds = 120;
constexpr double kAverageTol = 1e-8;
constexpr double kAvgEps = 1e-3;
constexpr double kProjectionTol = 1e-10;
constexpr double kSandwichTol = 1e-12;
constexpr double kBarbellSlope = 2.0, kBarbellSlopeTol = 0.3;
constexpr double kLiftSpeedup = 0.5;
constexpr int kSpectralPairs = 100;
constexpr double kSpectralTol = 1e-10;
constexpr double kSpectralBudgetSeconds = 60;
constexpr Index kOracleStateLimit = 500;
constexpr double kOracleTol = 1e-10;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

Chain mh(const Graph& g) { return metropolis_hastings(g, uniform_distribution(g.num_nodes())); }

MixingOptions quiet() {
  MixingOptions o;
  o.chi2 = false;
  o.spectral_bound = false;
  return o;
}

Vector random_pi(int n, double spread, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(1.0, spread);
  Vector pi(n);
  for (int i = 0; i < n; ++i) pi[i] = u(rng);
  return pi / pi.sum();
}

// Marked mass and conformance recomputed from the raw lifted chain.
void check_pseudo_lift(const LiftedChain& lc, const std::string& name, Outcome& out, double& worst_mass,
                       int& violations) {
  const Graph& g = *lc.origin.graph();
  Vector marked = Vector::Zero(lc.num_original());
  for (Index s : lc.marked) marked[lc.f[s]] += lc.chain.pi()[s];
  const double mass = (marked - 0.5 * lc.origin.pi()).cwiseAbs().maxCoeff();
  int bad = 0;
  for (Index i = 0; i < lc.chain.P().outerSize(); ++i)
    for (SparseMatrix::InnerIterator it(lc.chain.P(), i); it; ++it)
      if (it.value() > 0 && !g.conformant(lc.f[i], lc.f[it.col()])) ++bad;
  const LiftValidity v = validate_lift(lc);
  worst_mass = std::max({worst_mass, mass, v.marked_mass_residual.value_or(1.0)});
  violations += bad + v.conformance_violations;
  out.require(mass <= kMassTol && v.marked_mass_residual && *v.marked_mass_residual <= kMassTol, name + " marked mass");
  out.require(bad == 0 && v.conformance_violations == 0, name + " conformance");
  out.require(lc.marked.size() == static_cast<std::size_t>(lc.num_original()), name + " |T| = n");
}

// ---------------------------------------------------------------------------

void ring_mixing_separation(Outcome& out) {
  const auto t0 = Clock::now();
  std::vector<double> ns, mh_tau, lift_tau;
  bool sampled = false;
  for (int n : {16, 32, 64, 128}) {
    const Chain c = mh(gen::ring(n));
    const LiftedChain lc = star_pseudo_lift(c);
    const MixingReport a = tv_mixing_time(c, kMixEps, quiet());
    const MixingReport b = lift_mixing_time(lc, kMixEps, quiet());
    sampled = sampled || b.lower_bound_only();
    ns.push_back(n);
    mh_tau.push_back(static_cast<double>(a.tau_tv));
    lift_tau.push_back(static_cast<double>(b.tau_tv));
    out.detail << " n=" << n << ":" << a.tau_tv << "/" << b.tau_tv << "(" << lc.chain.size() << " states)";
  }
  const double s_mh = oracle::loglog_slope(ns, mh_tau), s_lift = oracle::loglog_slope(ns, lift_tau);
  const double secs = seconds_since(t0);
  out.detail << "; slopes MH " << fmt(s_mh) << ", star " << fmt(s_lift) << "; " << fmt(secs) << " s";
  if (sampled) out.detail << "; largest lift uses original nodes plus double-sweep starts";
  out.require(s_mh >= kMhSlopeLo && s_mh <= kMhSlopeHi, "MH slope");
  out.require(s_lift >= kLiftSlopeLo && s_lift <= kLiftSlopeHi, "lift slope");
  out.require(lift_tau.back() < mh_tau.back(), "lift faster at n=128");
  out.require(secs <= kRingBudgetSeconds, "runtime");
}

void pseudo_lifting_property(Outcome& out) {
  std::vector<std::pair<std::string, LiftedChain>> lifts;
  for (int n : {4, 8, 16, 32, 64, 128}) lifts.emplace_back("star ring(" + std::to_string(n) + ")", star_pseudo_lift(mh(gen::ring(n))));
  lifts.emplace_back("star path(2)", star_pseudo_lift(mh(gen::path(2))));
  lifts.emplace_back("star barbell(16)", star_pseudo_lift(mh(gen::barbell(16))));
  for (int s : {4, 8, 16}) {
    const Chain c = mh(gen::grid(2, s));
    lifts.emplace_back("star grid(2," + std::to_string(s) + ")", star_pseudo_lift(c));
    lifts.emplace_back("hier grid(2," + std::to_string(s) + ")", hierarchical_pseudo_lift(c));
    for (int R : {1, 2, 3}) lifts.emplace_back("hier grid R=" + std::to_string(R), hierarchical_pseudo_lift(c, {std::nullopt, R}));
  }
  lifts.emplace_back("hier ring(64) R=4", hierarchical_pseudo_lift(mh(gen::ring(64)), {std::nullopt, 4}));
  lifts.emplace_back("hier barbell(16)", hierarchical_pseudo_lift(mh(gen::barbell(16))));
  std::mt19937_64 rng(2024);
  for (int k = 0; k < 10; ++k) {
    const Graph g = oracle::random_connected_graph(6 + 3 * k, 0.08, rng);
    const Chain c = metropolis_hastings(g, random_pi(g.num_nodes(), 5.0, rng));
    lifts.emplace_back("star random " + std::to_string(k), star_pseudo_lift(c));
    lifts.emplace_back("hier random " + std::to_string(k), hierarchical_pseudo_lift(c));
  }
  double worst = 0;
  int violations = 0;
  for (const auto& [name, lc] : lifts) check_pseudo_lift(lc, name, out, worst, violations);
  out.detail << " " << lifts.size() << " lifts; worst marked-mass residual " << fmt(worst) << "; conformance violations "
             << violations;
}

void exact_size_formula(Outcome& out) {
  for (int s : {4, 8, 16}) {
    const Graph g = gen::grid(2, s);
    const LiftedChain lc = hierarchical_pseudo_lift(mh(g));
    const long n = g.num_nodes(), Y = lc.num_centers, R = lc.radius, D = lc.diameter;
    const long formula = g.num_edges() + 2 * R * n + 2 * D * Y;

    // Independent count from the support of P_hat: undirected pairs among
    // the copies of V plus directed arcs touching an added state.
    long support = 0;
    for (Index i = 0; i < lc.chain.P().outerSize(); ++i)
      for (SparseMatrix::InnerIterator it(lc.chain.P(), i); it; ++it) {
        const Index j = it.col();
        if (i == j || it.value() <= 0) continue;
        if (i < n && j < n) support += i < j ? 1 : 0;
        else ++support;
      }
    const double rho = doubling_constant(g).dimension();
    const double net_bound = std::pow(2.0 * D / R, rho);
    out.detail << " s=" << s << ": |E^|=" << lc.edge_count() << " formula " << formula << " support " << support << " R=" << R
               << " D=" << D << " |Y|=" << Y << "<=" << fmt(net_bound) << " (rho " << fmt(rho) << ")";
    out.require(lc.edge_count() == formula && support == formula, "edge count s=" + std::to_string(s));
    out.require(Y <= net_bound, "net size s=" + std::to_string(s));
  }
}

void stopping_rule(Outcome& out) {
  const auto t0 = Clock::now();
  std::vector<double> ns, lengths;
  for (int n : {8, 16, 32}) {
    const LiftedChain lc = star_pseudo_lift(mh(gen::ring(n)));
    const StoppingRuleReport r = simulate_star_stopping_rule(lc, kStoppingTrials, 20240 + n);
    ns.push_back(n);
    lengths.push_back(r.mean_length);
    out.detail << " n=" << n << ": mean " << fmt(r.mean_length, 4) << " TV " << fmt(r.tv_to_stationary);
    if (n == 8) out.require(r.tv_to_stationary <= kStoppingTvTol, "TV on ring(8)");
  }
  const double slope = oracle::loglog_slope(ns, lengths);
  const double secs = seconds_since(t0);
  out.detail << "; slope " << fmt(slope) << "; " << fmt(secs) << " s";
  out.require(std::abs(slope - 1.0) <= kStoppingSlopeTol, "length slope");
  out.require(secs <= kStoppingBudgetSeconds, "runtime");
}

void averaging(Outcome& out) {
  std::vector<std::pair<std::string, LiftedChain>> fixtures;
  for (int n : {16, 32, 64}) {
    fixtures.emplace_back("MH ring(" + std::to_string(n) + ")", identity_lift(mh(gen::ring(n))));
    fixtures.emplace_back("star ring(" + std::to_string(n) + ")", star_pseudo_lift(mh(gen::ring(n))));
  }
  fixtures.emplace_back("hier grid(2,4)", hierarchical_pseudo_lift(mh(gen::grid(2, 4))));
  fixtures.emplace_back("hier grid(2,8)", hierarchical_pseudo_lift(mh(gen::grid(2, 8))));
  fixtures.emplace_back("star barbell(16)", star_pseudo_lift(mh(gen::barbell(16))));

  double worst_abs = 0;
  int bound_failures = 0;
  for (const auto& [name, lc] : fixtures) {
    const Index n = lc.num_original();
    const Vector x = Vector::LinSpaced(n, 1.0, static_cast<double>(n));
    const double x_ave = x.mean();
    AveragingState s = init_state(lc, x);
    run_until(s, kAverageTol / (2 * x_ave));
    const double err = (estimates(s).array() - x_ave).abs().maxCoeff();
    worst_abs = std::max(worst_abs, err);
    out.require(err <= kAverageTol, name + " convergence");

    const RunningBoundReport b = check_running_mixing_bound(lc, kAvgEps);
    if (!(b.T_eps <= b.tau)) ++bound_failures;
    out.require(b.T_eps <= b.tau, name + " T_eps <= tau");
  }

  std::vector<double> ns, t_mh, t_star;
  for (int n : {16, 32, 64}) {
    ns.push_back(n);
    t_mh.push_back(static_cast<double>(worst_case(identity_lift(mh(gen::ring(n))), kAvgEps).T_eps));
    t_star.push_back(static_cast<double>(worst_case(star_pseudo_lift(mh(gen::ring(n))), kAvgEps).T_eps));
  }
  const double s_mh = oracle::loglog_slope(ns, t_mh), s_star = oracle::loglog_slope(ns, t_star);
  out.detail << " " << fixtures.size() << " fixtures; worst |estimate - x_ave| " << fmt(worst_abs) << "; T_eps MH ";
  for (double t : t_mh) out.detail << t << " ";
  out.detail << "(slope " << fmt(s_mh) << "), star ";
  for (double t : t_star) out.detail << t << " ";
  out.detail << "(slope " << fmt(s_star) << "); bound failures " << bound_failures;
  out.require(s_mh >= kMhSlopeLo && s_mh <= kMhSlopeHi, "MH T_eps slope");
  out.require(s_star >= kLiftSlopeLo && s_star <= kLiftSlopeHi, "star T_eps slope");
}

struct ExpanderRun {
  Chain base;
  ExpanderSpec ex;
  FlowSearch search;
  PruneResult pruned;
  LiftedChain lc;
};

ExpanderRun expander_run(const Graph& g, std::uint64_t seed) {
  ExpanderRun r;
  r.base = lazy(mh(g));
  r.ex = build_expander(g.num_nodes(), 3, r.base.pi(), seed);
  r.search = find_feasible_flow(r.base, r.ex);
  r.pruned = prune_to_extreme(r.search.flow, r.base, r.ex);
  r.lc = expander_lift(r.base, r.pruned.flow);
  return r;
}

void expander_validity(Outcome& out) {
  for (const auto& [name, g] : {std::pair{std::string("ring(8)"), gen::ring(8)}, std::pair{std::string("barbell(16)"), gen::barbell(16)}}) {
    const ExpanderRun r = expander_run(g, 7);
    const LiftedChain& lc = r.lc;
    const Index n = lc.num_original();

    // Projections recomputed from a dense stationary solve of P_hat.
    const Matrix P = to_dense(lc.chain.P());
    const Vector pi_hat = oracle::stationary(P);
    Vector pi_proj = Vector::Zero(n);
    Matrix q_proj = Matrix::Zero(n, n);
    for (Index s = 0; s < P.rows(); ++s) {
      pi_proj[lc.f[s]] += pi_hat[s];
      for (Index t = 0; t < P.cols(); ++t) q_proj(lc.f[s], lc.f[t]) += pi_hat[s] * P(s, t);
    }
    const Matrix Q = to_dense(r.base.ergodic_flow());
    const double pi_res = (pi_proj - r.base.pi()).cwiseAbs().maxCoeff();
    const double q_res = (q_proj - Q).cwiseAbs().maxCoeff();
    const LiftValidity v = validate_lift(lc);

    bool sandwich = true;
    for (Index u = 0; u < n; ++u)
      sandwich = sandwich && pi_hat[u] >= 0.5 * r.base.pi()[u] - kSandwichTol && pi_hat[u] <= r.base.pi()[u] + kSandwichTol;

    const Matrix induced = oracle::induced(P, n);
    const double floor_gap = (induced - to_dense(r.ex.chain.P()) / (2.0 * lc.W)).minCoeff();
    const double lib_gap = (to_dense(induced_chain(lc).P()) - to_dense(r.ex.chain.P()) / (2.0 * lc.W)).minCoeff();
    const std::size_t bound = support_bound(r.base, r.ex);

    out.detail << " " << name << ": W=" << lc.W << " states " << lc.chain.size() << " pi/Q residual " << fmt(pi_res) << "/"
               << fmt(q_res) << " induced-floor margin " << fmt(floor_gap) << " support " << r.pruned.support_after << "<="
               << bound << ";";
    out.require(pi_res <= kProjectionTol && q_res <= kProjectionTol, name + " projections");
    out.require(v.ok() && *v.pi_projection_residual <= kProjectionTol && *v.q_projection_residual <= kProjectionTol,
                name + " library projections");
    out.require(sandwich, name + " sandwich");
    out.require(floor_gap >= -kSandwichTol && lib_gap >= -kSandwichTol, name + " induced floor");
    out.require(r.pruned.support_after <= bound, name + " support");
    out.require(check_flow(r.pruned.flow, r.base).ok(), name + " flow");
  }
}

void barbell_conductance(Outcome& out) {
  std::vector<double> ns, inv;
  for (int n : {8, 12, 16}) {
    const Chain c = uniform_neighbor_walk(gen::barbell(n));
    const double lib = conductance(c).value;
    const double brute = oracle::conductance(to_dense(c.P()), c.pi());
    out.require(std::abs(lib - brute) <= 1e-12 * brute, "exact conductance n=" + std::to_string(n));
    ns.push_back(n);
    inv.push_back(1.0 / lib);
    out.detail << " n=" << n << ": 1/Phi=" << fmt(1.0 / lib, 5);
  }
  const double slope = oracle::loglog_slope(ns, inv);
  out.detail << "; slope " << fmt(slope);
  out.require(std::abs(slope - kBarbellSlope) <= kBarbellSlopeTol, "1/Phi slope");

  const ExpanderRun r = expander_run(gen::barbell(16), 7);
  const long tau_base = tv_mixing_time(r.base, kMixEps, quiet()).tau_tv;
  const long tau_lift = lift_mixing_time(r.lc, kMixEps, quiet()).tau_tv;
  // Bottleneck bound tau(eps) >= (1 - 2 eps) / (2 Q(S, S^c) / pi(S)) on the
  // lifted cut over one clique; it holds for any chain with these masses.
  double q_cut = 0, pi_cut = 0;
  const SparseMatrix Qhat = r.lc.chain.ergodic_flow();
  for (Index i = 0; i < Qhat.outerSize(); ++i) {
    if (r.lc.f[i] >= 8) continue;
    pi_cut += r.lc.chain.pi()[i];
    for (SparseMatrix::InnerIterator it(Qhat, i); it; ++it)
      if (r.lc.f[it.col()] >= 8) q_cut += it.value();
  }
  const double bottleneck = (1 - 2 * kMixEps) / (2 * q_cut / pi_cut);
  out.detail << "; lazy MH tau " << tau_base << ", expander lift tau " << tau_lift << " (W=" << r.lc.W << ", "
             << r.lc.chain.size() << " states), target <= " << fmt(kLiftSpeedup * tau_base)
             << "; bottleneck bound on the lifted clique cut: tau >= " << fmt(bottleneck);
  out.require(tau_lift <= kLiftSpeedup * tau_base, "lift halves tau");
}

// P1 = P2-dominating chain built from a lazy MH chain for another target,
// optionally with a circulation on a triangle to break reversibility.
void spectral_claims(Outcome& out) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u01(0, 1);
  int a1_checked = 0, violations = 0, disagreements = 0, nonreversible = 0;
  for (int trial = 0; trial < kSpectralPairs; ++trial) {
    const int n = 3 + trial % 10;
    Graph base = oracle::random_connected_graph(n, 0.2, rng);
    std::vector<Graph::Edge> edges = base.edges();
    edges.insert(edges.end(), {{0, 1}, {1, 2}, {0, 2}});
    const Graph g(n, edges);
    const Chain c2 = metropolis_hastings(g, random_pi(n, 3.0, rng));
    const Vector pi1 = random_pi(n, 3.0, rng);
    const double laziness = 0.5 + 0.4 * u01(rng);
    Matrix P1 = laziness * Matrix::Identity(n, n) + (1 - laziness) * to_dense(metropolis_hastings(g, pi1).P());
    if (trial % 2 == 1) {
      Matrix Q1 = pi1.asDiagonal() * P1;
      const double eta = 0.5 * std::min({Q1(1, 0), Q1(2, 1), Q1(0, 2)});
      Q1(0, 1) += eta, Q1(1, 2) += eta, Q1(2, 0) += eta;
      Q1(1, 0) -= eta, Q1(2, 1) -= eta, Q1(0, 2) -= eta;
      P1 = pi1.cwiseInverse().asDiagonal() * Q1;
    }
    const Chain c1 = Chain::from_transition(SparseMatrix(P1.sparseView()), pi1, nullptr);
    const Matrix P2 = to_dense(c2.P());
    double alpha = 1.0, beta = 1.0;
    for (int i = 0; i < n; ++i) {
      beta = std::min(beta, P1(i, i));
      for (int j = 0; j < n; ++j)
        if (P2(i, j) > 0) alpha = std::min(alpha, P1(i, j) / P2(i, j));
    }
    const Vector ratio = pi1.cwiseQuotient(c2.pi());
    const double c = ratio.minCoeff(), d = ratio.maxCoeff();
    const MinorizationReport rep = spectral_minorization_check(c1, c2, alpha, beta, c, d);

    // Dense eigensolves, independent of the library's spectral code.
    const double gap2 = oracle::reversible_gap(P2, c2.pi());
    const double mult1 = oracle::multiplicative_gap(P1, pi1);
    const double bound_a2 = std::min(alpha * beta * c / (d * d) * gap2, 2 * beta * beta);
    if (mult1 < bound_a2 - kSpectralTol) ++violations;
    if (rep.a2_holds != (mult1 >= bound_a2 - kSpectralTol)) ++disagreements;
    if (c1.is_reversible()) {
      ++a1_checked;
      const double gap1 = oracle::reversible_gap(P1, pi1);
      const double bound_a1 = std::min(alpha * c / (d * d) * gap2, 2 * beta);
      if (gap1 < bound_a1 - kSpectralTol) ++violations;
      if (!rep.a1_holds || *rep.a1_holds != (gap1 >= bound_a1 - kSpectralTol)) ++disagreements;
    } else {
      ++nonreversible;
    }
  }
  const double secs = seconds_since(t0);
  out.detail << " " << kSpectralPairs << " pairs (" << nonreversible << " non-reversible P1, " << a1_checked
             << " with both claims); violations " << violations << "; library/oracle disagreements " << disagreements << "; "
             << fmt(secs) << " s";
  out.require(violations == 0, "inequality violations");
  out.require(disagreements == 0, "library agrees with oracle");
  out.require(secs <= kSpectralBudgetSeconds, "runtime");
}

// Worst TV over all starts at t = 0..T from dense powers.
std::vector<double> dense_trace(const Matrix& P, const Vector& pi, long T) {
  std::vector<double> trace;
  Matrix Pt = Matrix::Identity(P.rows(), P.cols());
  for (long t = 0; t <= T; ++t) {
    double worst = 0;
    for (Index i = 0; i < P.rows(); ++i) worst = std::max(worst, 0.5 * (Pt.row(i).transpose() - pi).cwiseAbs().sum());
    trace.push_back(worst);
    Pt = Pt * P;
  }
  return trace;
}

void oracle_equivalence(Outcome& out) {
  std::vector<std::pair<std::string, LiftedChain>> fixtures;
  for (int n : {8, 16, 32}) fixtures.emplace_back("MH ring(" + std::to_string(n) + ")", identity_lift(mh(gen::ring(n))));
  fixtures.emplace_back("MH barbell(16)", identity_lift(mh(gen::barbell(16))));
  fixtures.emplace_back("MH grid(2,4)", identity_lift(mh(gen::grid(2, 4))));
  for (int n : {4, 8, 16}) fixtures.emplace_back("star ring(" + std::to_string(n) + ")", star_pseudo_lift(mh(gen::ring(n))));
  fixtures.emplace_back("star barbell(8)", star_pseudo_lift(mh(gen::barbell(8))));
  fixtures.emplace_back("hier grid(2,4)", hierarchical_pseudo_lift(mh(gen::grid(2, 4))));
  fixtures.emplace_back("hier grid(2,4) R=1", hierarchical_pseudo_lift(mh(gen::grid(2, 4)), {std::nullopt, 1}));
  fixtures.emplace_back("expander ring(8)", expander_run(gen::ring(8), 7).lc);

  int tested = 0, skipped = 0;
  long points = 0;
  double worst = 0;
  for (const auto& [name, lc] : fixtures) {
    if (lc.chain.size() > kOracleStateLimit) {
      ++skipped;
      continue;
    }
    ++tested;
    const Matrix P = to_dense(lc.chain.P());
    MixingOptions all = quiet();
    all.starts.resize(static_cast<std::size_t>(lc.chain.size()));
    for (Index s = 0; s < lc.chain.size(); ++s) all.starts[static_cast<std::size_t>(s)] = s;
    const MixingReport r = tv_mixing_time(lc.chain, kMixEps, all);
    const std::vector<double> dense = dense_trace(P, lc.chain.pi(), r.tau_tv);
    for (long t = 0; t <= r.tau_tv; ++t) worst = std::max(worst, std::abs(dense[t] - r.distance_trace[t]));
    points += r.tau_tv + 1;

    if (lc.construction == Construction::Expander) continue;
    const Index n = lc.num_original();
    AveragingState s = init_state(lc, Vector::LinSpaced(n, 1.0, 2.0));
    Vector y = s.y;
    for (int t = 0; t <= 200; ++t, ++points) {
      worst = std::max(worst, (s.y - y).cwiseAbs().maxCoeff());
      step(s);
      y = P * y;
    }
  }
  out.detail << " " << tested << " fixtures (" << skipped << " over " << kOracleStateLimit << " states skipped), " << points
             << " time points; worst deviation " << fmt(worst);
  out.require(worst <= kOracleTol, "sparse vs dense");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"1 ring mixing separation", ring_mixing_separation},
      {"2 pseudo-lifting mass and conformance", pseudo_lifting_property},
      {"3 hierarchical size formula", exact_size_formula},
      {"4 star stopping rule", stopping_rule},
      {"5 averaging correctness and scaling", averaging},
      {"6 expander lifting validity", expander_validity},
      {"7 barbell conductance and expander speedup", barbell_conductance},
      {"8 spectral comparison claims", spectral_claims},
      {"9 sparse vs dense oracle", oracle_equivalence},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome out;
    try {
      run(out);
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail << " [exception: " << e.what() << "]";
    }
    if (!out.pass) ++failed;
    std::cout << (out.pass ? "PASS " : "FAIL ") << name << ":" << out.detail.str() << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed;
}
