#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "liftedmix/flows.hpp"
#include "liftedmix/lp.hpp"

namespace liftedmix {

namespace {

// Directed arcs (i,j), i != j, of the chain's graph with their ergodic flow.
struct ArcIndex {
  std::vector<int> offset;  // arcs of i are offset[i] .. offset[i+1]-1, in neighbor order
  std::vector<int> from, to;
  std::vector<double> flow;

  explicit ArcIndex(const Chain& c) {
    if (!c.graph()) throw std::invalid_argument("flow routing needs the chain's graph");
    const Graph& g = *c.graph();
    const int n = g.num_nodes();
    offset.assign(n + 1, 0);
    for (int i = 0; i < n; ++i) {
      offset[i + 1] = offset[i] + g.degree(i);
      for (int j : g.neighbors(i)) {
        from.push_back(i);
        to.push_back(j);
        flow.push_back(c.pi()[i] * c.P().coeff(i, j));
      }
    }
  }

  int size() const { return static_cast<int>(from.size()); }

  int find(const Graph& g, int i, int j) const {
    const auto& nb = g.neighbors(i);
    auto it = std::lower_bound(nb.begin(), nb.end(), j);
    if (it == nb.end() || *it != j) return -1;
    return offset[i] + static_cast<int>(it - nb.begin());
  }
};

std::vector<int> remove_cycles(const std::vector<int>& path) {
  std::vector<int> out;
  for (int v : path) {
    auto it = std::find(out.begin(), out.end(), v);
    if (it != out.end()) out.erase(it + 1, out.end());
    else out.push_back(v);
  }
  return out;
}

}  // namespace

std::map<std::pair<int, int>, double> FlowDecomposition::loads() const {
  std::map<std::pair<int, int>, double> load;
  for (const FlowPath& p : paths)
    for (std::size_t k = 0; k + 1 < p.nodes.size(); ++k)
      if (p.nodes[k] != p.nodes[k + 1]) load[{p.nodes[k], p.nodes[k + 1]}] += p.weight;
  return load;
}

int FlowDecomposition::max_length() const {
  int longest = 0;
  for (const FlowPath& p : paths) longest = std::max(longest, p.length());
  return longest;
}

std::size_t FlowDecomposition::support() const {
  return static_cast<std::size_t>(
      std::count_if(paths.begin(), paths.end(), [](const FlowPath& p) { return p.length() > 0; }));
}

std::vector<Commodity> expander_demands(const ExpanderSpec& ex) {
  std::vector<Commodity> out;
  const Chain& c = ex.chain;
  for (int i = 0; i < c.size(); ++i) {
    for (SparseMatrix::InnerIterator it(c.P(), i); it; ++it) {
      const double g = c.pi()[i] * it.value();
      if (g > 0) out.push_back({i, static_cast<int>(it.col()), g});
    }
  }
  return out;
}

std::size_t support_bound(const Chain& c, const ExpanderSpec& ex) {
  if (!c.graph()) throw std::invalid_argument("support bound needs the chain's graph");
  return static_cast<std::size_t>(ex.graph->num_arcs() + c.graph()->num_arcs());
}

FlowResult solve_balanced_flow(const Chain& c, const ExpanderSpec& ex, int W) {
  if (W < 1) throw std::invalid_argument("W must be at least 1");
  if (ex.chain.size() != c.size()) throw std::invalid_argument("expander and chain sizes differ");
  const Graph& g = *c.graph();
  const ArcIndex arcs(c);
  const int n = g.num_nodes();
  const int A = arcs.size();

  const std::vector<Commodity> all = expander_demands(ex);
  std::vector<int> routed;  // indices into `all` with s != t
  for (std::size_t k = 0; k < all.size(); ++k)
    if (all[k].source != all[k].sink) routed.push_back(static_cast<int>(k));
  const int K = static_cast<int>(routed.size());

  FlowDecomposition fd;
  fd.W = W;
  fd.demands = all;

  std::vector<std::vector<int>> path_nodes;
  std::vector<int> path_commodity;  // index into routed
  std::vector<int> path_column;
  if (K > 0) {
    Vector b = Vector::Zero(K + A);
    for (int k = 0; k < K; ++k) b[k] = all[routed[k]].demand;
    lp::RevisedSimplex lp(b);
    {
      Vector col = Vector::Zero(K + A);
      for (int e = 0; e < A; ++e) col[K + e] = -W * arcs.flow[e];
      lp.add_column(col, 1.0);  // lambda
      for (int e = 0; e < A; ++e) lp.add_column(Vector::Unit(K + A, K + e), 0.0);
    }
    std::set<std::pair<int, std::vector<int>>> known;
    auto add_path = [&](int k, std::vector<int> nodes) {
      if (!known.insert({k, nodes}).second) return false;
      Vector col = Vector::Zero(K + A);
      col[k] = 1.0;
      for (std::size_t s = 0; s + 1 < nodes.size(); ++s) col[K + arcs.find(g, nodes[s], nodes[s + 1])] += 1.0;
      path_column.push_back(lp.add_column(col, 0.0));
      path_commodity.push_back(k);
      path_nodes.push_back(std::move(nodes));
      return true;
    };

    for (int k = 0; k < K; ++k) {
      const Commodity& cm = all[routed[k]];
      std::vector<int> p = shortest_path(g, cm.source, cm.sink);
      if (static_cast<int>(p.size()) - 1 > W)
        return FlowInfeasible{W, std::numeric_limits<double>::infinity(),
                              "shortest path " + std::to_string(cm.source) + "->" + std::to_string(cm.sink) +
                                  " is longer than W"};
      add_path(k, std::move(p));
    }

    const int hops = std::min(W, n - 1);
    constexpr int kMaxRounds = 10000;
    for (int round = 0;; ++round) {
      if (round >= kMaxRounds) throw NonConvergenceError("column generation did not converge", 0);
      const lp::Status st = lp.solve();
      if (st != lp::Status::Optimal) throw NonConvergenceError("flow master LP failed to solve", 0);
      const Vector& y = lp.duals();
      std::vector<double> cost(A);
      for (int e = 0; e < A; ++e) cost[e] = std::max(0.0, -y[K + e]);

      bool added = false;
      int k = 0;
      while (k < K) {
        // One hop-limited Bellman-Ford per source serves all its commodities.
        const int s = all[routed[k]].source;
        const double inf = std::numeric_limits<double>::infinity();
        std::vector<std::vector<double>> dist(hops + 1, std::vector<double>(n, inf));
        std::vector<std::vector<int>> pred(hops + 1, std::vector<int>(n, -1));
        dist[0][s] = 0;
        for (int h = 1; h <= hops; ++h) {
          dist[h] = dist[h - 1];
          for (int u = 0; u < n; ++u) {
            if (dist[h - 1][u] == inf) continue;
            for (int a = arcs.offset[u]; a < arcs.offset[u + 1]; ++a) {
              const double nd = dist[h - 1][u] + cost[a];
              if (nd < dist[h][arcs.to[a]] - 1e-15) {
                dist[h][arcs.to[a]] = nd;
                pred[h][arcs.to[a]] = u;
              }
            }
          }
        }
        for (; k < K && all[routed[k]].source == s; ++k) {
          const int t = all[routed[k]].sink;
          if (dist[hops][t] >= y[k] - 1e-10) continue;
          std::vector<int> rev{t};
          int v = t;
          for (int h = hops; h > 0 && v != s; --h)
            if (pred[h][v] >= 0) {
              v = pred[h][v];
              rev.push_back(v);
            }
          std::reverse(rev.begin(), rev.end());
          added |= add_path(k, remove_cycles(rev));
        }
      }
      if (!added) break;
    }

    const double lambda = lp.objective();
    if (lambda > 1.0 + 1e-10)
      return FlowInfeasible{W, lambda, "minimum congestion exceeds the budget"};

    const Vector x = lp.primal();
    std::vector<double> total(K, 0.0);
    for (std::size_t p = 0; p < path_nodes.size(); ++p)
      if (x[path_column[p]] > 1e-14) total[path_commodity[p]] += x[path_column[p]];
    for (int k = 0; k < K; ++k) {
      const double scale = all[routed[k]].demand / total[k];
      for (std::size_t p = 0; p < path_nodes.size(); ++p)
        if (path_commodity[p] == k && x[path_column[p]] > 1e-14)
          fd.paths.push_back({path_nodes[p], x[path_column[p]] * scale});
    }
  }
  // Paths come out in commodity order; splice the self-loop demands in place.
  std::vector<FlowPath> ordered;
  std::size_t next = 0;
  for (const Commodity& cm : all) {
    if (cm.source == cm.sink) {
      ordered.push_back({{cm.source}, cm.demand});
      continue;
    }
    while (next < fd.paths.size() && fd.paths[next].source() == cm.source && fd.paths[next].sink() == cm.sink)
      ordered.push_back(fd.paths[next++]);
  }
  fd.paths = std::move(ordered);
  return fd;
}

int initial_flow_budget(const Chain& c) {
  double phi;
  if (c.size() <= kExactConductanceLimit) phi = conductance(c, ConductanceMode::Exact).value;
  else phi = conductance(c, ConductanceMode::SpectralBounds).upper;
  return std::max(1, static_cast<int>(std::ceil(1.0 / phi - 1e-12)));
}

FlowSearch find_feasible_flow(const Chain& c, const ExpanderSpec& ex, int max_W) {
  FlowSearch search;
  search.W0 = initial_flow_budget(c);
  for (long W = search.W0; W <= max_W; W *= 2) {
    search.tried.push_back(static_cast<int>(W));
    FlowResult r = solve_balanced_flow(c, ex, static_cast<int>(W));
    if (auto* fd = std::get_if<FlowDecomposition>(&r)) {
      search.flow = std::move(*fd);
      return search;
    }
  }
  throw std::runtime_error("no feasible flow with W <= " + std::to_string(max_W));
}

FlowCheck check_flow(const FlowDecomposition& fd, const Chain& c) {
  if (!c.graph()) throw std::invalid_argument("flow check needs the chain's graph");
  const Graph& g = *c.graph();
  const Index n = c.size();
  FlowCheck check;
  check.W = fd.W;
  double total = 0;
  Vector starts = Vector::Zero(n), ends = Vector::Zero(n);
  std::map<std::pair<int, int>, double> by_commodity;
  for (const FlowPath& p : fd.paths) {
    if (!(p.weight > 0)) ++check.non_positive_weights;
    total += p.weight;
    starts[p.source()] += p.weight;
    ends[p.sink()] += p.weight;
    by_commodity[{p.source(), p.sink()}] += p.weight;
    check.max_length = std::max(check.max_length, p.length());
    for (std::size_t k = 0; k + 1 < p.nodes.size(); ++k)
      if (p.nodes[k] != p.nodes[k + 1] && !g.has_edge(p.nodes[k], p.nodes[k + 1])) ++check.non_adjacent_steps;
  }
  check.total_residual = std::abs(total - 1.0);
  for (const Commodity& cm : fd.demands) {
    auto it = by_commodity.find({cm.source, cm.sink});
    const double got = it == by_commodity.end() ? 0.0 : it->second;
    check.demand_residual = std::max(check.demand_residual, std::abs(got - cm.demand));
  }
  check.source_residual = (starts - c.pi()).lpNorm<Eigen::Infinity>();
  check.sink_residual = (ends - c.pi()).lpNorm<Eigen::Infinity>();
  for (const auto& [arc, load] : fd.loads()) {
    const double cap = fd.W * c.pi()[arc.first] * c.P().coeff(arc.first, arc.second);
    check.capacity_excess = std::max(check.capacity_excess, load - cap);
  }
  return check;
}

PruneResult prune_to_extreme(const FlowDecomposition& fd, const Chain& c, const ExpanderSpec& ex) {
  (void)ex;
  const Graph& g = *c.graph();
  const ArcIndex arcs(c);
  const int A = arcs.size();
  PruneResult result;
  result.support_before = fd.support();

  // Routed paths are the variables; zero-length paths pass through untouched.
  std::map<std::pair<int, int>, int> commodity_row;
  std::vector<int> var_row;
  std::vector<std::vector<int>> var_arcs;
  std::vector<std::size_t> var_path;
  for (std::size_t p = 0; p < fd.paths.size(); ++p) {
    const FlowPath& path = fd.paths[p];
    if (path.length() == 0) continue;
    auto [it, fresh] = commodity_row.try_emplace({path.source(), path.sink()}, static_cast<int>(commodity_row.size()));
    (void)fresh;
    var_row.push_back(it->second);
    std::vector<int> used;
    for (std::size_t k = 0; k + 1 < path.nodes.size(); ++k)
      if (path.nodes[k] != path.nodes[k + 1]) used.push_back(arcs.find(g, path.nodes[k], path.nodes[k + 1]));
    var_arcs.push_back(std::move(used));
    var_path.push_back(p);
  }
  const int K = static_cast<int>(commodity_row.size());
  std::vector<double> x;
  for (std::size_t p : var_path) x.push_back(fd.paths[p].weight);
  std::vector<double> cap(A);
  for (int e = 0; e < A; ++e) cap[e] = fd.W * arcs.flow[e];
  auto tight_tol = [&](int e) { return 1e-12 * std::max(1.0, cap[e]); };

  std::vector<char> alive(x.size(), 1);
  const int max_iter = 10 * static_cast<int>(x.size() + A) + 10;
  int iter = 0;
  for (;; ++iter) {
    if (iter >= max_iter) {
      result.stalled = true;
      break;
    }
    std::vector<double> load(A, 0.0);
    std::vector<int> live;
    for (std::size_t v = 0; v < x.size(); ++v) {
      if (!alive[v]) continue;
      live.push_back(static_cast<int>(v));
      for (int e : var_arcs[v]) load[e] += x[v];
    }
    std::vector<int> tight;
    std::vector<int> tight_row(A, -1);
    for (int e = 0; e < A; ++e)
      if (load[e] >= cap[e] - tight_tol(e)) {
        tight_row[e] = K + static_cast<int>(tight.size());
        tight.push_back(e);
      }
    const int rows = K + static_cast<int>(tight.size());
    const int cols = static_cast<int>(live.size());
    Matrix M = Matrix::Zero(rows, cols);
    for (int j = 0; j < cols; ++j) {
      const int v = live[j];
      M(var_row[v], j) = 1.0;
      for (int e : var_arcs[v])
        if (tight_row[e] >= 0) M(tight_row[e], j) += 1.0;
    }
    Eigen::FullPivLU<Matrix> lu(M);
    lu.setThreshold(1e-10);
    if (lu.rank() == cols) break;
    Vector z = lu.kernel().col(0);
    z /= z.cwiseAbs().maxCoeff();

    double theta = std::numeric_limits<double>::infinity();
    int hit_var = -1;
    for (int j = 0; j < cols; ++j)
      if (z[j] < -1e-12 && x[live[j]] / -z[j] < theta) {
        theta = x[live[j]] / -z[j];
        hit_var = live[j];
      }
    std::vector<double> delta(A, 0.0);
    for (int j = 0; j < cols; ++j)
      for (int e : var_arcs[live[j]]) delta[e] += z[j];
    for (int e = 0; e < A; ++e)
      if (tight_row[e] < 0 && delta[e] > 1e-12) {
        const double room = (cap[e] - load[e]) / delta[e];
        if (room < theta) {
          theta = room;
          hit_var = -1;
        }
      }
    if (!std::isfinite(theta)) {
      result.stalled = true;
      break;
    }
    for (int j = 0; j < cols; ++j) x[live[j]] += theta * z[j];
    if (hit_var >= 0) x[hit_var] = 0;
    for (int v : live)
      if (x[v] <= 1e-15) alive[v] = 0;
  }

  // Restore exact demands, then rebuild in the input order.
  std::vector<double> want(K, 0.0), got(K, 0.0);
  for (std::size_t v = 0; v < x.size(); ++v) {
    want[var_row[v]] += fd.paths[var_path[v]].weight;
    if (alive[v]) got[var_row[v]] += x[v];
  }
  result.flow.W = fd.W;
  result.flow.demands = fd.demands;
  std::size_t v = 0;
  for (std::size_t p = 0; p < fd.paths.size(); ++p) {
    if (fd.paths[p].length() == 0) {
      result.flow.paths.push_back(fd.paths[p]);
      continue;
    }
    if (alive[v]) result.flow.paths.push_back({fd.paths[p].nodes, x[v] * want[var_row[v]] / got[var_row[v]]});
    ++v;
  }
  result.support_after = result.flow.support();
  return result;
}

}  // namespace liftedmix
