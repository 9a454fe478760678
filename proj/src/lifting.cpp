#include "liftedmix/lifting.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>
#include <numeric>

namespace liftedmix {

std::string to_string(LiftKind k) { return k == LiftKind::Lifting ? "lifting" : "pseudo-lifting"; }

std::string to_string(Construction c) {
  switch (c) {
    case Construction::Identity: return "identity";
    case Construction::Star: return "star";
    case Construction::Hierarchical: return "hierarchical";
    case Construction::Expander: return "expander";
  }
  return "unknown";
}

std::vector<Index> LiftedChain::original_states() const {
  std::vector<Index> v(static_cast<std::size_t>(num_original()));
  std::iota(v.begin(), v.end(), Index{0});
  return v;
}

long LiftedChain::edge_count() const {
  long count = origin.graph() ? origin.graph()->num_edges() : 0;
  for (const LiftPath& p : paths) count += p.length();
  return count;
}

double delta_for_length(int L) {
  if (L < 1) throw std::invalid_argument("path length must be at least 1");
  return 0.5 / (1.0 - 1.0 / (2.0 * L));
}

int auto_net_radius(int n, int diameter, double rho) {
  const double r = diameter * std::pow(2.0, rho / (rho + 1.0)) * std::pow(static_cast<double>(n), -1.0 / (rho + 1.0));
  return std::clamp(static_cast<int>(std::ceil(r - 1e-9)), 1, std::max(1, diameter));
}

namespace {

const Graph& require_graph(const Chain& c) {
  if (!c.graph()) throw std::invalid_argument("lifting needs the chain's graph");
  return *c.graph();
}

// Builder for Q_hat: original flow scaled, plus directed paths with fresh interiors.
class LiftBuilder {
 public:
  LiftBuilder(const Chain& c, int extra_named) : origin_(c), n_(static_cast<int>(c.size())) {
    f_.resize(static_cast<std::size_t>(n_));
    std::iota(f_.begin(), f_.end(), 0);
    f_.resize(static_cast<std::size_t>(n_ + extra_named), -1);
  }

  void scale_original(double factor) {
    SparseMatrix Q = origin_.ergodic_flow();
    for (Index i = 0; i < Q.outerSize(); ++i)
      for (SparseMatrix::InnerIterator it(Q, i); it; ++it)
        if (it.value() != 0) t_.emplace_back(i, it.col(), factor * it.value());
  }

  void name(Index state, int original) { f_[static_cast<std::size_t>(state)] = original; }

  // Adds the path through `copied` from `source` to `sink`; copied.front() and
  // copied.back() are f(source), f(sink).
  void add_path(std::string role, Index source, Index sink, const std::vector<int>& copied, double weight) {
    LiftPath p;
    p.role = std::move(role);
    p.source = source;
    p.sink = sink;
    p.copied = copied;
    p.states.push_back(source);
    for (std::size_t k = 1; k + 1 < copied.size(); ++k) {
      p.states.push_back(static_cast<Index>(f_.size()));
      f_.push_back(copied[k]);
    }
    p.states.push_back(sink);
    for (std::size_t k = 0; k + 1 < p.states.size(); ++k) t_.emplace_back(p.states[k], p.states[k + 1], weight);
    paths_.push_back(std::move(p));
  }

  LiftedChain finish(LiftKind kind, Construction construction) {
    const Index N = static_cast<Index>(f_.size());
    SparseMatrix Q(N, N);
    Q.setFromTriplets(t_.begin(), t_.end());
    LiftedChain lc;
    lc.chain = Chain::from_flow(Q);
    lc.origin = origin_;
    lc.f = std::move(f_);
    lc.kind = kind;
    lc.construction = construction;
    lc.paths = std::move(paths_);
    if (kind == LiftKind::PseudoLifting) lc.marked = lc.original_states();
    return lc;
  }

  std::vector<Triplet>& triplets() { return t_; }

 private:
  const Chain& origin_;
  int n_;
  std::vector<int> f_;
  std::vector<Triplet> t_;
  std::vector<LiftPath> paths_;
};

// Shortest path a -> b, padded to L edges by repeating b at the end.
std::vector<int> padded_back(const Graph& g, int a, int b, int L) {
  std::vector<int> p = shortest_path(g, a, b);
  if (static_cast<int>(p.size()) - 1 > L) throw std::logic_error("path longer than its padded length");
  p.resize(static_cast<std::size_t>(L + 1), b);
  return p;
}

// Shortest path a -> b, padded to L edges by repeating a at the start.
std::vector<int> padded_front(const Graph& g, int a, int b, int L) {
  std::vector<int> p = shortest_path(g, a, b);
  if (static_cast<int>(p.size()) - 1 > L) throw std::logic_error("path longer than its padded length");
  p.insert(p.begin(), static_cast<std::size_t>(L + 1) - p.size(), a);
  return p;
}

// Path length used for the root: the diameter, or the root's eccentricity when
// the diameter is only a lower bound that falls short of it.
int root_length(const Graph& g, int root, const Diameter& d) {
  if (d.exact) return d.value;
  const auto dist = bfs_distances(g, root);
  return std::max(d.value, *std::max_element(dist.begin(), dist.end()));
}

}  // namespace

LiftedChain identity_lift(const Chain& c) {
  LiftedChain lc;
  lc.chain = c;
  lc.origin = c;
  lc.f.resize(static_cast<std::size_t>(c.size()));
  std::iota(lc.f.begin(), lc.f.end(), 0);
  lc.marked = lc.original_states();
  lc.kind = LiftKind::Lifting;
  lc.construction = Construction::Identity;
  return lc;
}

LiftedChain star_pseudo_lift(const Chain& c, const StarLiftParams& params) {
  const Graph& g = require_graph(c);
  const int n = g.num_nodes();
  if (n < 2) throw std::invalid_argument("star lift needs at least two nodes");
  const int root = params.root.value_or(graph_center(g));
  if (root < 0 || root >= n) throw std::invalid_argument("root out of range");
  const int D = root_length(g, root, diameter(g));
  const double delta = delta_for_length(D);
  const double k = delta / (2.0 * D);
  const Index vprime = n;

  LiftBuilder b(c, 1);
  b.scale_original(1.0 - delta);
  b.name(vprime, root);
  for (int w = 0; w < n; ++w) {
    const double weight = k * c.pi()[w];
    b.add_path("to_root", w, vprime, padded_back(g, w, root, D), weight);
    b.add_path("from_root", vprime, w, padded_front(g, root, w, D), weight);
  }
  LiftedChain lc = b.finish(LiftKind::PseudoLifting, Construction::Star);
  lc.root = root;
  lc.diameter = D;
  lc.delta = delta;
  return lc;
}

LiftedChain hierarchical_pseudo_lift(const Chain& c, const HierLiftParams& params) {
  const Graph& g = require_graph(c);
  const int n = g.num_nodes();
  if (n < 2) throw std::invalid_argument("hierarchical lift needs at least two nodes");
  const int root = params.root.value_or(graph_center(g));
  if (root < 0 || root >= n) throw std::invalid_argument("root out of range");
  const int D = root_length(g, root, diameter(g));
  const int R = params.radius ? *params.radius : auto_net_radius(n, D, doubling_constant(g).dimension());
  if (R < 1 || R > D) throw std::invalid_argument("net radius must lie in [1, D]");
  const RNet net = greedy_r_net(g, R);
  const int L = R + D;
  const double delta = delta_for_length(L);
  const double k = delta / (2.0 * L);
  const int Y = static_cast<int>(net.centers.size());
  const Index vprime = n;
  auto up = [&](int a) { return static_cast<Index>(n + 1 + 2 * a); };    // y'_1, collects from its cluster
  auto down = [&](int a) { return static_cast<Index>(n + 2 + 2 * a); };  // y'_2, feeds its cluster

  LiftBuilder b(c, 1 + 2 * Y);
  b.scale_original(1.0 - delta);
  b.name(vprime, root);
  for (int a = 0; a < Y; ++a) {
    b.name(up(a), net.centers[a]);
    b.name(down(a), net.centers[a]);
  }
  for (int w = 0; w < n; ++w) {
    const int y = net.assignment[w];
    const int a = net.center_index(y);
    const double weight = k * c.pi()[w];
    b.add_path("member_to_center", w, up(a), padded_back(g, w, y, R), weight);
    b.add_path("center_to_member", down(a), w, padded_front(g, y, w, R), weight);
  }
  for (int a = 0; a < Y; ++a) {
    double mass = 0;
    for (int w : net.clusters[a]) mass += c.pi()[w];
    const int y = net.centers[a];
    b.add_path("center_to_root", up(a), vprime, padded_back(g, y, root, D), k * mass);
    b.add_path("root_to_center", vprime, down(a), padded_front(g, root, y, D), k * mass);
  }
  LiftedChain lc = b.finish(LiftKind::PseudoLifting, Construction::Hierarchical);
  lc.root = root;
  lc.diameter = D;
  lc.radius = R;
  lc.num_centers = Y;
  lc.delta = delta;
  return lc;
}

LiftedChain expander_lift(const Chain& c_in, const FlowDecomposition& flow) {
  require_graph(c_in);
  bool lazified = false;
  for (Index i = 0; i < c_in.size() && !lazified; ++i) lazified = c_in.P().coeff(i, i) < 0.5 - kExactTol;
  const Chain c = lazified ? lazy(c_in) : c_in;
  const int n = static_cast<int>(c.size());
  const double scale = 1.0 / (2.0 * flow.W);

  std::map<std::pair<int, int>, double> load = flow.loads();
  LiftBuilder b(c, 0);
  int clamped = 0;
  {
    SparseMatrix Q = c.ergodic_flow();
    for (Index i = 0; i < Q.outerSize(); ++i) {
      for (SparseMatrix::InnerIterator it(Q, i); it; ++it) {
        double v = it.value();
        if (auto l = load.find({static_cast<int>(i), static_cast<int>(it.col())}); l != load.end()) {
          v -= l->second * scale;
          load.erase(l);
        }
        if (v < -kExactTol) throw CongestionError(static_cast<int>(i), static_cast<int>(it.col()), v);
        if (v < 0) {
          ++clamped;
          v = 0;
        }
        if (v > 0) b.triplets().emplace_back(i, it.col(), v);
      }
    }
    if (!load.empty()) {
      const auto& [arc, l] = *load.begin();
      throw CongestionError(arc.first, arc.second, -l * scale);
    }
  }
  if (clamped > 0)
    std::clog << "expander_lift: clamped " << clamped << " original edge flow(s) from rounding below zero\n";
  for (const FlowPath& p : flow.paths) {
    if (p.length() == 0) continue;
    b.add_path("flow", p.source(), p.sink(), p.nodes, p.weight * scale);
  }
  LiftedChain lc = b.finish(LiftKind::Lifting, Construction::Expander);
  lc.W = flow.W;
  lc.lazified = lazified;
  lc.clamped_edges = clamped;
  (void)n;
  return lc;
}

bool LiftValidity::projection_ok(double tol) const {
  if (marked_mass_residual) return *marked_mass_residual <= tol && marked_size_ok;
  return pi_projection_residual.value_or(0) <= tol && q_projection_residual.value_or(0) <= tol;
}

bool LiftValidity::ok(double tol) const {
  return conformance_ok() && pi_total_residual <= kExactTol && flow_total_residual <= kExactTol &&
         stationarity_residual <= tol && projection_ok(tol);
}

LiftValidity validate_lift(const LiftedChain& lc) {
  LiftValidity r;
  const Chain& ch = lc.chain;
  const Chain& origin = lc.origin;
  const Index N = ch.size();
  const Index n = origin.size();
  if (static_cast<Index>(lc.f.size()) != N) throw std::invalid_argument("projection map has the wrong size");
  const Graph* g = origin.graph().get();
  const SparseMatrix Q = ch.ergodic_flow();
  std::map<std::pair<int, int>, double> projected;
  for (Index i = 0; i < N; ++i) {
    for (SparseMatrix::InnerIterator it(Q, i); it; ++it) {
      if (it.value() == 0) continue;
      const int u = lc.f[i], v = lc.f[it.col()];
      if (g && u != v && !g->has_edge(u, v)) ++r.conformance_violations;
      projected[{u, v}] += it.value();
    }
  }
  r.pi_total_residual = std::abs(ch.pi().sum() - 1.0);
  r.flow_total_residual = std::abs(Q.sum() - 1.0);
  r.stationarity_residual = (ch.P().transpose() * ch.pi() - ch.pi()).lpNorm<Eigen::Infinity>();

  if (lc.kind == LiftKind::Lifting) {
    Vector mass = Vector::Zero(n);
    for (Index i = 0; i < N; ++i) mass[lc.f[i]] += ch.pi()[i];
    r.pi_projection_residual = (mass - origin.pi()).lpNorm<Eigen::Infinity>();
    const SparseMatrix Qo = origin.ergodic_flow();
    double worst = 0;
    for (Index i = 0; i < n; ++i)
      for (SparseMatrix::InnerIterator it(Qo, i); it; ++it) {
        auto p = projected.find({static_cast<int>(i), static_cast<int>(it.col())});
        const double got = p == projected.end() ? 0.0 : p->second;
        worst = std::max(worst, std::abs(got - it.value()));
        if (p != projected.end()) projected.erase(p);
      }
    for (const auto& [arc, value] : projected) worst = std::max(worst, std::abs(value));
    r.q_projection_residual = worst;
  } else {
    Vector mass = Vector::Zero(n);
    for (Index s : lc.marked) mass[lc.f[s]] += ch.pi()[s];
    r.marked_mass_residual = (mass - 0.5 * origin.pi()).lpNorm<Eigen::Infinity>();
    r.marked_size_ok = static_cast<Index>(lc.marked.size()) == n;
  }
  return r;
}

Chain induced_chain(const LiftedChain& lc) { return induced_chain(lc.chain, lc.original_states()); }

MixingReport lift_mixing_time(const LiftedChain& lc, double eps, MixingOptions opts) {
  if (opts.starts.empty() && lc.chain.size() > kExactMixingLimit)
    opts.starts = default_sampled_starts(lc.chain, lc.original_states());
  return tv_mixing_time(lc.chain, eps, opts);
}

}  // namespace liftedmix
