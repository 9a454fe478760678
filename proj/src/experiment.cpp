#include "liftedmix/experiment.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

namespace liftedmix {

namespace {

const std::set<std::string> kMeasurements = {"conductance", "spectral", "tv-mixing", "averaging", "size"};
const std::set<std::string> kGraphKinds = {"ring", "grid", "barbell", "complete", "path", "star", "edge_list"};
const std::set<std::string> kLiftKinds = {"none", "star", "hierarchical", "expander"};

void reject_unknown(const YAML::Node& node, const std::string& where, const std::set<std::string>& allowed) {
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
T scalar(const YAML::Node& node, const std::string& what) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("bad value for " + what);
  }
}

std::string chain_name(ChainKind k) { return k == ChainKind::MH ? "mh" : "lazy-mh"; }

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config is not valid YAML: ") + e.what());
  }
  if (!root.IsMap()) throw ConfigError("config must be a mapping of sections");
  reject_unknown(root, "config", {"name", "graph", "chain", "lift", "measure", "sweep"});
  ExperimentConfig c;
  if (root["name"]) c.name = scalar<std::string>(root["name"], "name");

  const YAML::Node graph = root["graph"];
  if (!graph || !graph.IsMap()) throw ConfigError("missing [graph] section");
  reject_unknown(graph, "graph", {"kind", "dim", "file"});
  c.graph_kind = scalar<std::string>(graph["kind"], "graph.kind");
  if (!kGraphKinds.count(c.graph_kind)) throw ConfigError("unknown graph kind '" + c.graph_kind + "'");
  if (graph["dim"]) c.graph_dim = scalar<int>(graph["dim"], "graph.dim");
  if (graph["file"]) c.graph_file = scalar<std::string>(graph["file"], "graph.file");
  if (c.graph_kind == "grid" && c.graph_dim < 1) throw ConfigError("graph.dim must be positive");
  if (c.graph_kind == "edge_list" && c.graph_file.empty()) throw ConfigError("edge_list needs graph.file");

  if (const YAML::Node chain = root["chain"]) {
    reject_unknown(chain, "chain", {"kind"});
    const auto kind = scalar<std::string>(chain["kind"], "chain.kind");
    if (kind == "mh") c.chain = ChainKind::MH;
    else if (kind == "lazy-mh") c.chain = ChainKind::LazyMH;
    else throw ConfigError("unknown chain kind '" + kind + "'");
  }

  if (const YAML::Node lift = root["lift"]) {
    reject_unknown(lift, "lift", {"kind", "radius", "degree"});
    c.lift = scalar<std::string>(lift["kind"], "lift.kind");
    if (!kLiftKinds.count(c.lift)) throw ConfigError("unknown lift kind '" + c.lift + "'");
    if (lift["radius"]) {
      const auto r = scalar<std::string>(lift["radius"], "lift.radius");
      if (r != "auto") {
        c.radius = scalar<int>(lift["radius"], "lift.radius");
        if (*c.radius < 1) throw ConfigError("lift.radius must be positive or auto");
      }
    }
    if (lift["degree"]) c.expander_degree = scalar<int>(lift["degree"], "lift.degree");
  }

  if (const YAML::Node m = root["measure"]) {
    reject_unknown(m, "measure", {"list", "tv_eps", "avg_eps", "avg_mode"});
    if (m["list"]) c.measurements = scalar<std::vector<std::string>>(m["list"], "measure.list");
    for (const auto& name : c.measurements)
      if (!kMeasurements.count(name)) throw ConfigError("unknown measurement '" + name + "'");
    if (m["tv_eps"]) c.tv_eps = scalar<double>(m["tv_eps"], "measure.tv_eps");
    if (m["avg_eps"]) c.avg_eps = scalar<double>(m["avg_eps"], "measure.avg_eps");
    if (!(c.tv_eps > 0 && c.tv_eps < 1) || !(c.avg_eps > 0 && c.avg_eps < 1))
      throw ConfigError("epsilons must lie in (0,1)");
    if (m["avg_mode"]) {
      const auto mode = scalar<std::string>(m["avg_mode"], "measure.avg_mode");
      if (mode == "worst_case") c.avg_mode = AveragingMode::WorstCase;
      else if (mode == "given") c.avg_mode = AveragingMode::Given;
      else throw ConfigError("unknown averaging mode '" + mode + "'");
    }
  }

  if (const YAML::Node s = root["sweep"]) {
    reject_unknown(s, "sweep", {"n", "seed", "workers"});
    if (s["n"]) c.sweep = scalar<std::vector<int>>(s["n"], "sweep.n");
    if (s["seed"]) c.seed = scalar<std::uint64_t>(s["seed"], "sweep.seed");
    if (s["workers"]) c.workers = scalar<int>(s["workers"], "sweep.workers");
  }
  std::sort(c.sweep.begin(), c.sweep.end());
  c.sweep.erase(std::unique(c.sweep.begin(), c.sweep.end()), c.sweep.end());
  if (c.graph_kind == "edge_list") c.sweep = {0};
  if (c.sweep.empty()) throw ConfigError("sweep.n must list at least one size");
  if (c.workers < 1) throw ConfigError("sweep.workers must be positive");
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  SlopeFit fit;
  fit.points = static_cast<int>(x.size());
  if (x.size() != y.size()) throw std::invalid_argument("fit needs paired samples");
  if (x.size() < 3) return fit;
  const Index k = static_cast<Index>(x.size());
  Matrix A(k, 2);
  Vector b(k);
  for (Index i = 0; i < k; ++i) {
    if (x[i] <= 0 || y[i] <= 0) return fit;
    A(i, 0) = std::log(x[i]);
    A(i, 1) = 1.0;
    b[i] = std::log(y[i]);
  }
  const Vector coef = A.colPivHouseholderQr().solve(b);
  fit.slope = coef[0];
  fit.intercept = coef[1];
  fit.residual = std::sqrt((A * coef - b).squaredNorm() / static_cast<double>(k));
  return fit;
}

bool SweepReport::all_ok() const {
  return std::all_of(points.begin(), points.end(), [](const PointRecord& p) { return p.ok; });
}

namespace {

bool wants(const ExperimentConfig& c, const std::string& m) {
  return std::find(c.measurements.begin(), c.measurements.end(), m) != c.measurements.end();
}

PointRecord run_point(const ExperimentConfig& cfg, int size_param, const RunOptions& options) {
  PointRecord rec;
  rec.size_param = size_param;
  GeneratorSpec spec;
  spec.kind = cfg.graph_kind;
  spec.size = size_param;
  spec.dim = cfg.graph_dim;
  spec.file = cfg.graph_file;
  auto g = std::make_shared<const Graph>(generate(spec));
  const int n = g->num_nodes();
  Json& out = rec.measurements;
  out["graph"] = {{"spec", spec.to_string()}, {"n", n}, {"m", g->num_edges()}};
  rec.metrics["n"] = n;

  Chain c = metropolis_hastings(g, uniform_distribution(n));
  if (cfg.chain == ChainKind::LazyMH) c = lazy(c);

  LiftedChain lc;
  if (cfg.lift == "none") {
    lc = identity_lift(c);
  } else if (cfg.lift == "star") {
    lc = star_pseudo_lift(c);
  } else if (cfg.lift == "hierarchical") {
    HierLiftParams p;
    p.radius = cfg.radius;
    lc = hierarchical_pseudo_lift(c, p);
  } else {
    const Chain base = lazy(c);
    const ExpanderSpec ex = build_expander(n, cfg.expander_degree, base.pi(), cfg.seed);
    FlowSearch search = find_feasible_flow(base, ex);
    PruneResult pruned = prune_to_extreme(search.flow, base, ex);
    lc = expander_lift(base, pruned.flow);
    out["flow"] = {{"W0", search.W0},
                   {"W", search.flow.W},
                   {"tried", search.tried},
                   {"support_before", pruned.support_before},
                   {"support_after", pruned.support_after},
                   {"support_bound", support_bound(base, ex)},
                   {"stalled", pruned.stalled},
                   {"expander", to_json(ex)["certificate"]}};
    if (options.dump) {
      out["flow"]["decomposition"] = to_json(pruned.flow);
      out["flow"]["expander_edges"] = to_json(ex)["edges"];
    }
  }
  out["lift"] = {{"kind", cfg.lift}, {"validity", to_json(validate_lift(lc))}};

  if (wants(cfg, "size")) {
    Json size = {{"states", lc.chain.size()}, {"lifted_edges", lc.edge_count()}, {"nnz", lc.chain.nnz()}};
    if (lc.construction == Construction::Hierarchical) {
      const long expected = static_cast<long>(g->num_edges()) + 2L * lc.radius * n + 2L * lc.diameter * lc.num_centers;
      const double rho = doubling_constant(*g).dimension();
      size["radius"] = lc.radius;
      size["centers"] = lc.num_centers;
      size["diameter"] = lc.diameter;
      size["edge_formula"] = expected;
      size["edge_formula_ok"] = expected == lc.edge_count();
      size["rho"] = rho;
      size["net_bound"] = std::pow(2.0 * lc.diameter / lc.radius, rho);
    }
    out["size"] = size;
    rec.metrics["states"] = static_cast<double>(lc.chain.size());
    rec.metrics["nnz"] = static_cast<double>(lc.chain.nnz());
    rec.metrics["lifted_edges"] = static_cast<double>(lc.edge_count());
  }
  if (wants(cfg, "conductance")) {
    const auto mode = n <= kExactConductanceLimit ? ConductanceMode::Exact : ConductanceMode::SpectralBounds;
    const ConductanceResult r = conductance(c, mode);
    out["conductance"] = to_json(r);
    if (mode == ConductanceMode::Exact) rec.metrics["inverse_conductance"] = 1.0 / r.value;
  }
  if (wants(cfg, "spectral")) out["spectral"] = to_json(spectral(lc.chain));
  if (wants(cfg, "tv-mixing")) {
    MixingOptions opts;
    opts.chi2 = false;
    opts.spectral_bound = lc.chain.size() <= kDenseSpectralLimit;
    const MixingReport r = lift_mixing_time(lc, cfg.tv_eps, opts);
    out["tv_mixing"] = to_json(r);
    rec.metrics["tau_tv"] = static_cast<double>(r.tau_tv);
  }
  if (wants(cfg, "averaging")) {
    if (lc.construction == Construction::Expander) {
      out["averaging"] = {{"skipped", "averaging runs on identity lifts and pseudo-liftings only"}};
    } else {
      RunReport r;
      if (cfg.avg_mode == AveragingMode::WorstCase) {
        r = worst_case(lc, cfg.avg_eps);
      } else {
        AveragingState s = init_state(lc, Vector::LinSpaced(n, 1.0, static_cast<double>(n)));
        r = run_until(s, cfg.avg_eps);
      }
      out["averaging"] = to_json(r);
      rec.metrics["T_eps"] = static_cast<double>(r.T_eps);
      rec.metrics["total_cost"] = static_cast<double>(r.total_cost);
    }
  }
  if (options.dump) rec.chain_dump = to_json(lc);
  return rec;
}

}  // namespace

SweepReport run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  SweepReport report;
  report.config = config;
  report.points.resize(config.sweep.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < config.sweep.size(); i = next++) {
      try {
        report.points[i] = run_point(config, config.sweep[i], options);
      } catch (const std::exception& e) {
        PointRecord failed;
        failed.size_param = config.sweep[i];
        failed.ok = false;
        failed.error = e.what();
        report.points[i] = std::move(failed);
      }
    }
  };
  const int threads = std::min<int>(config.workers, static_cast<int>(config.sweep.size()));
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work);
  }

  std::set<std::string> names;
  for (const PointRecord& p : report.points)
    for (const auto& [k, v] : p.metrics) names.insert(k);
  names.erase("n");
  for (const std::string& name : names) {
    std::vector<double> x, y;
    for (const PointRecord& p : report.points) {
      if (!p.ok || !p.metrics.count(name)) continue;
      x.push_back(p.metrics.at("n"));
      y.push_back(p.metrics.at(name));
    }
    report.slopes[name] = fit_loglog(x, y);
  }
  return report;
}

Json to_json(const ExperimentConfig& c) {
  Json j = {{"name", c.name},
            {"graph", {{"kind", c.graph_kind}, {"dim", c.graph_dim}, {"file", c.graph_file}}},
            {"chain", chain_name(c.chain)},
            {"lift", {{"kind", c.lift}, {"radius", c.radius ? Json(*c.radius) : Json("auto")}, {"degree", c.expander_degree}}},
            {"measure",
             {{"list", c.measurements},
              {"tv_eps", c.tv_eps},
              {"avg_eps", c.avg_eps},
              {"avg_mode", c.avg_mode == AveragingMode::WorstCase ? "worst_case" : "given"}}},
            {"sweep", {{"n", c.sweep}, {"seed", c.seed}, {"workers", c.workers}}}};
  return j;
}

Json to_json(const SweepReport& r) {
  Json points = Json::array();
  for (const PointRecord& p : r.points) {
    Json j = {{"size_param", p.size_param}, {"ok", p.ok}};
    if (!p.ok) j["error"] = p.error;
    j["measurements"] = p.measurements;
    points.push_back(std::move(j));
  }
  Json slopes = Json::object();
  for (const auto& [name, fit] : r.slopes) {
    if (fit.slope)
      slopes[name] = {{"points", fit.points}, {"slope", *fit.slope}, {"intercept", *fit.intercept}, {"rms_residual", *fit.residual}};
    else
      slopes[name] = {{"points", fit.points}, {"slope", nullptr}, {"omitted", "needs at least three sweep points"}};
  }
  return {{"config", to_json(r.config)}, {"points", std::move(points)}, {"slopes", std::move(slopes)}};
}

namespace {

struct Prediction {
  double mixing, running, size, ops;
};

std::optional<Prediction> predict(const ExperimentConfig& c) {
  double d;
  if (c.graph_kind == "ring" || c.graph_kind == "path") d = 1;
  else if (c.graph_kind == "grid") d = c.graph_dim;
  else return std::nullopt;
  if (c.lift == "none") return Prediction{2 / d, 2 / d, 1, 1 + 2 / d};
  if (c.lift == "hierarchical")
    return Prediction{1 / d, 1 / d, 1 + 1 / (d * (d + 1)), 1 + (d + 2) / (d * (d + 1))};
  if (c.lift == "star") return Prediction{1 / d, 1 / d, 1 + 1 / d, 1 + 2 / d};
  return std::nullopt;
}

std::string column_of(const ExperimentConfig& c) {
  if (c.lift == "none") return "MH";
  if (c.lift == "hierarchical") return "pseudo-lifting";
  if (c.lift == "star") return "pseudo-lifting (star)";
  return "lifting";
}

}  // namespace

ComparisonTable report_table(const std::vector<SweepReport>& reports) {
  static const std::vector<std::pair<std::string, std::string>> kRows = {
      {"mixing time", "tau_tv"}, {"running time", "T_eps"}, {"size", "nnz"}, {"total operations", "total_cost"}};
  static const std::vector<std::string> kColumns = {"MH", "pseudo-lifting", "pseudo-lifting (star)", "lifting"};
  ComparisonTable table;
  std::set<std::string> rows, cols;
  for (const SweepReport& r : reports) {
    const std::string col = column_of(r.config);
    const auto pred = predict(r.config);
    for (const auto& [row, metric] : kRows) {
      auto it = r.slopes.find(metric);
      if (it == r.slopes.end()) continue;
      TableCell cell;
      cell.measured = it->second.slope;
      if (pred) {
        if (metric == "tau_tv") cell.predicted = pred->mixing;
        else if (metric == "T_eps") cell.predicted = pred->running;
        else if (metric == "nnz") cell.predicted = pred->size;
        else cell.predicted = pred->ops;
      }
      table.cells[{row, col}] = cell;
      rows.insert(row);
      cols.insert(col);
    }
  }
  for (const auto& [row, metric] : kRows)
    if (rows.count(row)) table.rows.push_back(row);
  for (const auto& col : kColumns)
    if (cols.count(col)) table.columns.push_back(col);
  return table;
}

std::string ComparisonTable::to_csv() const {
  std::ostringstream out;
  out << "quantity,method,measured_exponent,predicted_exponent\n";
  for (const auto& row : rows)
    for (const auto& col : columns) {
      auto it = cells.find({row, col});
      if (it == cells.end()) continue;
      out << row << ',' << col << ',';
      if (it->second.measured) out << format_double(*it->second.measured);
      out << ',';
      if (it->second.predicted) out << format_double(*it->second.predicted);
      out << '\n';
    }
  return out.str();
}

}  // namespace liftedmix
