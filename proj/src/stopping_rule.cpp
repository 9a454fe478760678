#include <algorithm>
#include <functional>
#include <random>
#include <thread>

#include "liftedmix/lifting.hpp"

namespace liftedmix {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Row-wise cumulative transition tables for sampling.
class Sampler {
 public:
  explicit Sampler(const SparseMatrix& P) : start_(P.rows() + 1, 0) {
    for (Index i = 0; i < P.rows(); ++i) {
      double acc = 0;
      for (SparseMatrix::InnerIterator it(P, i); it; ++it) {
        if (it.value() <= 0) continue;
        acc += it.value();
        cols_.push_back(it.col());
        cum_.push_back(acc);
      }
      cum_.back() = 1.0;
      start_[i + 1] = static_cast<Index>(cols_.size());
    }
  }

  Index step(Index i, std::mt19937_64& rng) const {
    const auto b = cum_.begin() + start_[i], e = cum_.begin() + start_[i + 1];
    if (e - b == 1) return cols_[start_[i]];
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    auto it = std::upper_bound(b, e, u);
    if (it == e) --it;
    return cols_[static_cast<std::size_t>(it - cum_.begin())];
  }

 private:
  std::vector<Index> start_;
  std::vector<Index> cols_;
  std::vector<double> cum_;
};

}  // namespace

StoppingRuleReport simulate_star_stopping_rule(const LiftedChain& lc, long trials, std::uint64_t seed,
                                               std::optional<int> start) {
  if (lc.construction != Construction::Star) throw std::invalid_argument("stopping rule needs a star lift");
  if (trials < 1) throw std::invalid_argument("trials must be positive");
  const Index N = lc.chain.size();
  const int n = static_cast<int>(lc.num_original());
  const int D = lc.diameter;
  const Index vprime = n;
  const double delta = lc.delta;

  // Position of each first interior of a path into the root, for branch 3.
  std::vector<char> enters_root_path(static_cast<std::size_t>(N), 0);
  for (const LiftPath& p : lc.paths)
    if (p.role == "to_root" && p.length() > 1) enters_root_path[static_cast<std::size_t>(p.states[1])] = 1;

  int s0;
  if (start) {
    s0 = *start;
  } else {
    const auto dist = bfs_distances(*lc.origin.graph(), lc.root);
    s0 = static_cast<int>(std::max_element(dist.begin(), dist.end()) - dist.begin());
  }
  if (s0 < 0 || s0 >= n) throw std::invalid_argument("start must be an original node");

  const double p0 = delta / (2.0 * D);
  const double p1 = delta * (D - 1) / (2.0 * D);
  const double p2 = 1.0 - delta + delta / (2.0 * D);
  const Sampler sampler(lc.chain.P());

  StoppingRuleReport report;
  report.trials = trials;
  report.start = s0;

  // Each trial owns its generator, so integer tallies are schedule-independent.
  auto run_trials = [&](long first, long stride, std::vector<long>& hits, long& total_length) {
    for (long trial = first; trial < trials; trial += stride) {
      std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(trial))));
      Index s = s0;
      long length = 0;
      auto walk = [&](long steps) {
        for (long k = 0; k < steps; ++k) s = sampler.step(s, rng);
        length += steps;
      };
      while (s != vprime) walk(1);
      const double x = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      if (x < p0) {
        // stop at v'
      } else if (x < p0 + p1) {
        walk(std::uniform_int_distribution<long>(1, D - 1)(rng));
      } else if (x < p0 + p1 + p2 || D == 1) {
        walk(D);
      } else {
        walk(D);
        while (!enters_root_path[static_cast<std::size_t>(s)]) walk(1);
        walk(std::uniform_int_distribution<long>(1, D - 1)(rng) - 1);
      }
      ++hits[static_cast<std::size_t>(s)];
      total_length += length;
    }
  };

  const long workers = std::clamp<long>(std::thread::hardware_concurrency(), 1, std::max<long>(1, trials / 1000));
  std::vector<std::vector<long>> hits(static_cast<std::size_t>(workers), std::vector<long>(static_cast<std::size_t>(N), 0));
  std::vector<long> lengths(static_cast<std::size_t>(workers), 0);
  {
    std::vector<std::jthread> pool;
    for (long w = 1; w < workers; ++w)
      pool.emplace_back(run_trials, w, workers, std::ref(hits[w]), std::ref(lengths[w]));
    run_trials(0, workers, hits[0], lengths[0]);
  }
  std::vector<long> total_hits(static_cast<std::size_t>(N), 0);
  long total_length = 0;
  for (long w = 0; w < workers; ++w) {
    for (Index i = 0; i < N; ++i) total_hits[i] += hits[w][i];
    total_length += lengths[w];
  }
  report.mean_length = static_cast<double>(total_length) / static_cast<double>(trials);
  report.empirical = Vector(N);
  for (Index i = 0; i < N; ++i) report.empirical[i] = static_cast<double>(total_hits[i]) / static_cast<double>(trials);
  report.tv_to_stationary = tv_distance(report.empirical, lc.chain.pi());
  return report;
}

}  // namespace liftedmix
