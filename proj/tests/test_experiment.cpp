#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "liftedmix/experiment.hpp"

using namespace liftedmix;

namespace {

const char* kRingStar = R"(
name: ring-star
graph: {kind: ring}
chain: {kind: mh}
lift: {kind: star}
measure: {list: [size, tv-mixing, averaging], avg_eps: 0.001, avg_mode: worst_case}
sweep: {n: [32, 8, 16, 16], seed: 3, workers: 2}
)";

}  // namespace

TEST_CASE("config parsing") {
  const ExperimentConfig c = parse_config(kRingStar);
  CHECK(c.name == "ring-star");
  CHECK(c.lift == "star");
  CHECK(c.sweep == std::vector<int>{8, 16, 32});
  CHECK(c.seed == 3);
  CHECK(c.workers == 2);
  CHECK(c.avg_mode == AveragingMode::WorstCase);
  CHECK_FALSE(c.radius.has_value());

  const ExperimentConfig h = parse_config("graph: {kind: grid, dim: 2}\nlift: {kind: hierarchical, radius: 3}\nsweep: {n: [4]}\n");
  CHECK(h.graph_dim == 2);
  CHECK(*h.radius == 3);
  CHECK(h.chain == ChainKind::MH);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config("graph: {kind: ring}\nsweep: {n: [8]}\nextra: 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("graph: {kind: ring, size: 3}\nsweep: {n: [8]}\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("graph: {kind: torus}\nsweep: {n: [8]}\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("graph: {kind: ring}\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("graph: {kind: ring}\nlift: {kind: hierarchical, radius: 0}\nsweep: {n: [8]}\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("graph: {kind: ring}\nmeasure: {list: [entropy]}\nsweep: {n: [8]}\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("graph: {kind: ring}\nmeasure: {tv_eps: 1.5}\nsweep: {n: [8]}\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("graph: [oops"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.yaml"), ConfigError);
}

TEST_CASE("shipped configs parse") {
  for (const char* name : {"ring_star.yaml", "grid_hierarchical.yaml"})
    CHECK_NOTHROW(load_config(std::string(LIFTEDMIX_CONFIG_DIR) + "/" + name));
}

TEST_CASE("log-log fits") {
  const SlopeFit exact = fit_loglog({2, 4, 8, 16}, {3 * 4.0, 3 * 16.0, 3 * 64.0, 3 * 256.0});
  CHECK(exact.points == 4);
  CHECK(*exact.slope == doctest::Approx(2.0));
  CHECK(*exact.intercept == doctest::Approx(std::log(3.0)));
  CHECK(*exact.residual < 1e-12);
  const SlopeFit two = fit_loglog({2, 4}, {1, 2});
  CHECK(two.points == 2);
  CHECK_FALSE(two.slope.has_value());
}

TEST_CASE("ring star sweep") {
  const SweepReport r = run_experiment(parse_config(kRingStar));
  REQUIRE(r.all_ok());
  REQUIRE(r.points.size() == 3);
  CHECK(r.points[0].size_param == 8);
  CHECK(r.points[2].size_param == 32);
  CHECK(r.points[1].measurements.at("lift").at("validity").at("ok") == true);
  CHECK(*r.slopes.at("tau_tv").slope > 0.6);
  CHECK(*r.slopes.at("tau_tv").slope < 1.4);

  const SweepReport serial = [] {
    ExperimentConfig c = parse_config(kRingStar);
    c.workers = 1;
    return run_experiment(c);
  }();
  CHECK(to_json(serial).at("points").dump() == to_json(r).at("points").dump());
  CHECK(to_json(serial).at("slopes").dump() == to_json(r).at("slopes").dump());

  const ComparisonTable t = report_table({r});
  CHECK(t.columns == std::vector<std::string>{"pseudo-lifting (star)"});
  CHECK(t.rows.size() == 4);
  const TableCell& mix = t.cells.at({"mixing time", "pseudo-lifting (star)"});
  CHECK(*mix.predicted == doctest::Approx(1.0));
  CHECK(*t.cells.at({"size", "pseudo-lifting (star)"}).predicted == doctest::Approx(2.0));
  const std::string csv = t.to_csv();
  CHECK(csv.rfind("quantity,method,measured_exponent,predicted_exponent\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
}

TEST_CASE("tables with too few points") {
  CHECK(report_table({}).to_csv() == "quantity,method,measured_exponent,predicted_exponent\n");
  const SweepReport one = run_experiment(parse_config("graph: {kind: ring}\nmeasure: {list: [tv-mixing]}\nsweep: {n: [8]}\n"));
  REQUIRE(one.all_ok());
  CHECK_FALSE(one.slopes.at("tau_tv").slope.has_value());
  const ComparisonTable t = report_table({one});
  CHECK(t.columns == std::vector<std::string>{"MH"});
  CHECK_FALSE(t.cells.at({"mixing time", "MH"}).measured.has_value());
  CHECK(t.to_csv().find("mixing time,MH,,2\n") != std::string::npos);
}

TEST_CASE("failing points are reported, not fatal") {
  const SweepReport r = run_experiment(parse_config("graph: {kind: barbell}\nsweep: {n: [5, 8]}\n"));
  CHECK_FALSE(r.all_ok());
  CHECK_FALSE(r.points[0].ok);
  CHECK_FALSE(r.points[0].error.empty());
  CHECK(r.points[1].ok);
}

TEST_CASE("hierarchical grid sweep reports the size formula") {
  const SweepReport r =
      run_experiment(parse_config("graph: {kind: grid, dim: 2}\nlift: {kind: hierarchical}\nmeasure: {list: [size]}\nsweep: {n: [4, 6]}\n"));
  REQUIRE(r.all_ok());
  for (const PointRecord& p : r.points) CHECK(p.measurements.at("size").at("edge_formula_ok") == true);
}

TEST_CASE("expander sweep point") {
  const SweepReport r = run_experiment(parse_config(
      "graph: {kind: ring}\nchain: {kind: lazy-mh}\nlift: {kind: expander, degree: 3}\nmeasure: {list: [size, averaging]}\nsweep: {n: [8], seed: 7}\n"));
  REQUIRE(r.all_ok());
  const Json& m = r.points[0].measurements;
  CHECK(m.at("lift").at("validity").at("ok") == true);
  CHECK(m.at("flow").at("support_after").get<int>() <= m.at("flow").at("support_bound").get<int>());
  CHECK(m.at("averaging").contains("skipped"));
}
