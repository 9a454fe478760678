#include "liftedmix/io.hpp"

#include <charconv>
#include <cstdio>

namespace liftedmix {

namespace {

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }
Json optional_number(const std::optional<long>& v) { return v ? Json(*v) : Json(nullptr); }

// Keeps every few-th entry plus the last one, at most `cap` values.
Json downsample(const std::vector<double>& trace, std::size_t cap = 256) {
  Json out = Json::array();
  if (trace.empty()) return out;
  const std::size_t stride = (trace.size() + cap - 1) / cap;
  for (std::size_t t = 0; t < trace.size(); t += stride) out.push_back({t, trace[t]});
  if ((trace.size() - 1) % stride != 0) out.push_back({trace.size() - 1, trace.back()});
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s) {
  double v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) throw std::invalid_argument("malformed number: " + s);
  return v;
}

Json to_json(const Chain& c) {
  Json triplets = Json::array();
  for (Index i = 0; i < c.P().outerSize(); ++i)
    for (SparseMatrix::InnerIterator it(c.P(), i); it; ++it)
      triplets.push_back({i, it.col(), format_double(it.value())});
  Json pi = Json::array();
  for (Index i = 0; i < c.size(); ++i) pi.push_back(format_double(c.pi()[i]));
  return {{"n", c.size()}, {"triplets", std::move(triplets)}, {"pi", std::move(pi)}};
}

Chain chain_from_json(const Json& j) {
  const Index n = j.at("n").get<Index>();
  std::vector<Triplet> t;
  for (const Json& e : j.at("triplets"))
    t.emplace_back(e.at(0).get<Index>(), e.at(1).get<Index>(), parse_double(e.at(2).get<std::string>()));
  SparseMatrix P(n, n);
  P.setFromTriplets(t.begin(), t.end());
  Vector pi(n);
  const Json& p = j.at("pi");
  if (static_cast<Index>(p.size()) != n) throw std::invalid_argument("pi has the wrong length");
  for (Index i = 0; i < n; ++i) pi[i] = parse_double(p.at(static_cast<std::size_t>(i)).get<std::string>());
  return Chain::from_transition(std::move(P), std::move(pi), nullptr);
}

Json to_json(const LiftedChain& lc) {
  Json j = to_json(lc.chain);
  j["f"] = lc.f;
  j["T"] = lc.marked;
  j["kind"] = to_string(lc.kind);
  j["construction"] = to_string(lc.construction);
  Json registry = Json::array();
  for (const LiftPath& p : lc.paths)
    registry.push_back({{"role", p.role}, {"source", p.source}, {"sink", p.sink}, {"copied", p.copied}, {"states", p.states}});
  j["path_registry"] = std::move(registry);
  Json params = {{"root", lc.root}, {"diameter", lc.diameter}, {"delta", format_double(lc.delta)}};
  if (lc.construction == Construction::Hierarchical) {
    params["radius"] = lc.radius;
    params["centers"] = lc.num_centers;
  }
  if (lc.construction == Construction::Expander) {
    params["W"] = lc.W;
    params["lazified"] = lc.lazified;
    params["clamped_edges"] = lc.clamped_edges;
  }
  j["params"] = std::move(params);
  return j;
}

Json to_json(const FlowDecomposition& fd) {
  Json paths = Json::array();
  for (const FlowPath& p : fd.paths)
    paths.push_back({{"s", p.source()}, {"t", p.sink()}, {"nodes", p.nodes}, {"w", format_double(p.weight)}});
  Json demands = Json::array();
  for (const Commodity& c : fd.demands)
    demands.push_back({{"s", c.source}, {"t", c.sink}, {"g", format_double(c.demand)}});
  return {{"W", fd.W}, {"paths", std::move(paths)}, {"demands", std::move(demands)}};
}

Json to_json(const ExpanderSpec& ex) {
  Json edges = Json::array();
  for (const auto& [u, v] : ex.graph->edges()) edges.push_back({u, v});
  return {{"n", ex.graph->num_nodes()},
          {"degree", ex.degree},
          {"edges", std::move(edges)},
          {"certificate",
           {{"spectral_gap", ex.spectral_gap},
            {"edge_expansion", optional_number(ex.edge_expansion)},
            {"seed", ex.seed},
            {"attempts", ex.attempts}}}};
}

Json to_json(const GraphMetrics& m) {
  return {{"n", m.n},
          {"m", m.m},
          {"diameter", m.diam.value},
          {"diameter_exact", m.diam.exact},
          {"doubling_constant", m.doubling.constant},
          {"exact", m.doubling.exact}};
}

Json to_json(const MixingReport& r) {
  Json j = {{"epsilon", r.epsilon},
            {"tau_tv", r.tau_tv},
            {"tau_chi2", r.tau_chi2 >= 0 ? Json(r.tau_chi2) : Json(nullptr)},
            {"start_mode", r.start_mode == StartMode::ExactAllStarts ? "exact-all-starts" : "sampled-starts"},
            {"lower_bound_only", r.lower_bound_only()},
            {"spectral_upper", optional_number(r.spectral_upper)},
            {"distance_trace", downsample(r.distance_trace)}};
  if (!r.starts.empty()) j["starts"] = r.starts;
  return j;
}

Json to_json(const SpectralReport& r) {
  return {{"gap", optional_number(r.gap)},
          {"multiplicative_gap", r.multiplicative_gap},
          {"pi_min", r.pi_min},
          {"reversible", r.reversible},
          {"iterative", r.iterative}};
}

Json to_json(const ConductanceResult& r) {
  if (r.mode == ConductanceMode::Exact)
    return {{"mode", "exact"}, {"value", r.value}, {"cut", r.cut}};
  return {{"mode", "spectral-bounds"}, {"lower", r.lower}, {"upper", r.upper}};
}

Json to_json(const RunReport& r) {
  return {{"eps", r.epsilon},
          {"T_eps", r.T_eps},
          {"ops_per_iter", r.ops_per_iter},
          {"total_cost", r.total_cost},
          {"mode", r.mode == AveragingMode::WorstCase ? "worst_case" : "given"},
          {"target", r.uniform_target ? "uniform" : "pi-weighted"},
          {"sum_conserved_checked", r.sum_conserved_checked},
          {"error_trace", downsample(r.error_trace)}};
}

Json to_json(const LiftValidity& v) {
  return {{"ok", v.ok()},
          {"conformance_violations", v.conformance_violations},
          {"pi_total_residual", v.pi_total_residual},
          {"flow_total_residual", v.flow_total_residual},
          {"stationarity_residual", v.stationarity_residual},
          {"pi_projection_residual", optional_number(v.pi_projection_residual)},
          {"q_projection_residual", optional_number(v.q_projection_residual)},
          {"marked_mass_residual", optional_number(v.marked_mass_residual)}};
}

Json to_json(const StoppingRuleReport& r) {
  return {{"trials", r.trials}, {"start", r.start}, {"mean_length", r.mean_length}, {"tv_to_stationary", r.tv_to_stationary}};
}

}  // namespace liftedmix
