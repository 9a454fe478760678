#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>

#include "liftedmix/chain.hpp"

namespace liftedmix {

double cut_ratio(const Chain& c, const std::vector<int>& S) {
  const Index n = c.size();
  std::vector<char> in(n, 0);
  for (int s : S) in.at(s) = 1;
  SparseMatrix Q = c.ergodic_flow();
  double flow = 0, mass = 0;
  for (Index i = 0; i < n; ++i) {
    if (!in[i]) continue;
    mass += c.pi()[i];
    for (SparseMatrix::InnerIterator it(Q, i); it; ++it)
      if (!in[it.col()]) flow += it.value();
  }
  return flow / (mass * (1.0 - mass));
}

namespace {

ConductanceResult exact_conductance(const Chain& c) {
  const int n = static_cast<int>(c.size());
  if (n > kExactConductanceLimit)
    throw std::invalid_argument("exact conductance enumerates 2^(n-1) cuts and is limited to n <= " +
                                std::to_string(kExactConductanceLimit) + "; use spectral bounds");
  if (n < 2) throw std::invalid_argument("conductance needs at least two states");
  Matrix Q = to_dense(c.ergodic_flow());
  const Vector& pi = c.pi();
  // Node n-1 stays outside S; Gray-code order over subsets of the others.
  const std::uint32_t count = 1u << (n - 1);
  std::uint32_t mask = 0;
  double cut = 0, mass = 0;
  double best = std::numeric_limits<double>::infinity();
  std::uint32_t best_mask = 0;
  auto recompute = [&](std::uint32_t m) {
    double f = 0, p = 0;
    for (int i = 0; i < n; ++i) {
      if (!(m >> i & 1u)) continue;
      p += pi[i];
      for (int j = 0; j < n; ++j)
        if (!(m >> j & 1u)) f += Q(i, j);
    }
    cut = f;
    mass = p;
  };
  for (std::uint32_t g = 1; g < count; ++g) {
    const int k = std::countr_zero(g);
    const std::uint32_t bit = 1u << k;
    if (mask & bit) {
      mask ^= bit;
      double out = 0, in = 0;
      for (int j = 0; j < n; ++j) {
        if (j == k) continue;
        if (mask >> j & 1u) in += Q(j, k);
        else out += Q(k, j);
      }
      cut += in - out;
      mass -= pi[k];
    } else {
      double out = 0, in = 0;
      for (int j = 0; j < n; ++j) {
        if (j == k) continue;
        if (mask >> j & 1u) in += Q(j, k);
        else out += Q(k, j);
      }
      mask |= bit;
      cut += out - in;
      mass += pi[k];
    }
    if ((g & 0xfffu) == 0) recompute(mask);
    if (mask == 0) continue;
    double ratio = cut / (mass * (1.0 - mass));
    if (ratio < best) {
      best = ratio;
      best_mask = mask;
    }
  }
  ConductanceResult r;
  r.mode = ConductanceMode::Exact;
  for (int i = 0; i < n; ++i)
    if (best_mask >> i & 1u) r.cut.push_back(i);
  r.value = cut_ratio(c, r.cut);
  r.lower = r.upper = r.value;
  return r;
}

}  // namespace

ConductanceResult conductance(const Chain& c, ConductanceMode mode) {
  if (mode == ConductanceMode::Exact) return exact_conductance(c);
  // Cheeger on the additive symmetrization brackets the min(pi(S), pi(S^c))
  // normalization; pi(S) pi(S^c) lies within a factor 2 of that minimum.
  double lambda = additive_gap(c);
  ConductanceResult r;
  r.mode = ConductanceMode::SpectralBounds;
  r.lower = lambda / 2.0;
  r.upper = 2.0 * std::sqrt(2.0 * lambda);
  r.value = std::numeric_limits<double>::quiet_NaN();
  return r;
}

}  // namespace liftedmix
