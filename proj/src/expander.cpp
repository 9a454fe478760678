#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <set>

#include "liftedmix/flows.hpp"

namespace liftedmix {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// One configuration-model pairing; empty when it produced a loop or a multi-edge.
std::vector<Graph::Edge> configuration_pairing(int n, int d, std::mt19937_64& rng) {
  std::vector<int> stubs;
  stubs.reserve(static_cast<std::size_t>(n) * d);
  for (int v = 0; v < n; ++v)
    for (int k = 0; k < d; ++k) stubs.push_back(v);
  std::shuffle(stubs.begin(), stubs.end(), rng);
  std::set<Graph::Edge> seen;
  std::vector<Graph::Edge> edges;
  for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
    int u = std::min(stubs[i], stubs[i + 1]);
    int v = std::max(stubs[i], stubs[i + 1]);
    if (u == v || !seen.insert({u, v}).second) return {};
    edges.emplace_back(u, v);
  }
  return edges;
}

void check_pi_ratio(const Vector& pi) {
  if (pi.minCoeff() <= 0) throw std::invalid_argument("pi must be strictly positive");
  if (pi.maxCoeff() / pi.minCoeff() > kMaxPiRatio * (1 + 1e-12))
    throw std::invalid_argument("pi_max / pi_min exceeds " + std::to_string(kMaxPiRatio));
}

}  // namespace

Chain expander_chain(std::shared_ptr<const Graph> g, const Vector& pi) {
  const int n = g->num_nodes();
  if (pi.size() != n) throw std::invalid_argument("pi size does not match expander");
  check_pi_ratio(pi);
  const int d = g->degree(0);
  for (int v = 0; v < n; ++v)
    if (g->degree(v) != d || g->has_self_loop(v)) throw std::invalid_argument("expander graph must be simple and regular");
  const double pi0 = pi.minCoeff();
  std::vector<Triplet> t;
  for (int i = 0; i < n; ++i) {
    for (int j : g->neighbors(i)) t.emplace_back(i, j, pi0 / (d * pi[i]));
    const double self = 1.0 - pi0 / pi[i];
    if (self > 0) t.emplace_back(i, i, self);
  }
  SparseMatrix P(n, n);
  P.setFromTriplets(t.begin(), t.end());
  return Chain::from_transition(std::move(P), pi / pi.sum(), std::move(g));
}

double edge_expansion(const Graph& g) {
  const int n = g.num_nodes();
  if (n > kExactConductanceLimit) throw std::invalid_argument("exact edge expansion is limited to n <= 24");
  if (n < 2) return 0;
  const std::uint32_t count = 1u << n;
  std::uint32_t mask = 0;
  int cut = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t gcode = 1; gcode < count; ++gcode) {
    const int k = std::countr_zero(gcode);
    int inside = 0;
    for (int j : g.neighbors(k)) inside += (mask >> j) & 1u;
    mask ^= 1u << k;
    // Adding k cuts its outside neighbors and heals its inside ones; removal is the mirror.
    cut += (mask >> k & 1u) ? g.degree(k) - 2 * inside : 2 * inside - g.degree(k);
    const int size = std::popcount(mask);
    if (size == 0 || 2 * size > n) continue;
    best = std::min(best, static_cast<double>(cut) / size);
  }
  return best;
}

ExpanderSpec make_expander_spec(std::shared_ptr<const Graph> g, const Vector& pi) {
  ExpanderSpec ex;
  ex.degree = g->degree(0);
  ex.chain = expander_chain(g, pi);
  ex.graph = std::move(g);
  ex.spectral_gap = spectral(ex.chain).gap.value_or(0.0);
  if (ex.graph->num_nodes() <= kExactConductanceLimit) ex.edge_expansion = edge_expansion(*ex.graph);
  ex.attempts = 1;
  return ex;
}

ExpanderSpec build_expander(int n, int d, const Vector& pi, std::uint64_t seed, int max_attempts) {
  if (d < 3) throw std::invalid_argument("expander degree must be at least 3");
  if (d >= n) throw std::invalid_argument("expander degree must be below n");
  if ((static_cast<long>(n) * d) % 2 != 0) throw std::invalid_argument("n * d must be even");
  if (pi.size() != n) throw std::invalid_argument("pi size does not match n");
  check_pi_ratio(pi);
  constexpr int kPairingsPerAttempt = 10000;
  double best_gap = 0;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    const std::uint64_t s = splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(attempt)));
    std::mt19937_64 rng(s);
    std::vector<Graph::Edge> edges;
    for (int k = 0; k < kPairingsPerAttempt && edges.empty(); ++k) edges = configuration_pairing(n, d, rng);
    if (edges.empty()) continue;
    std::shared_ptr<const Graph> g;
    try {
      g = std::make_shared<const Graph>(n, edges);
    } catch (const DisconnectedGraphError&) {
      continue;
    }
    ExpanderSpec ex = make_expander_spec(g, pi);
    best_gap = std::max(best_gap, ex.spectral_gap);
    if (ex.spectral_gap < kExpanderGapThreshold) continue;
    if (ex.edge_expansion && *ex.edge_expansion < kExpanderEdgeExpansionThreshold) continue;
    ex.seed = s;
    ex.attempts = attempt + 1;
    return ex;
  }
  throw CertificationError("no certified " + std::to_string(d) + "-regular expander on " + std::to_string(n) +
                               " nodes after " + std::to_string(max_attempts) + " attempts",
                           best_gap);
}

}  // namespace liftedmix
