#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "liftedmix/io.hpp"

namespace liftedmix {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ChainKind { MH, LazyMH };

struct ExperimentConfig {
  std::string name = "experiment";
  std::string graph_kind = "ring";  // ring | grid | barbell | complete | path | star | edge_list
  int graph_dim = 1;                // grid only
  std::string graph_file;           // edge_list only

  ChainKind chain = ChainKind::MH;

  std::string lift = "none";  // none | star | hierarchical | expander
  std::optional<int> radius;  // hierarchical; empty means auto
  int expander_degree = 3;

  std::vector<std::string> measurements;  // conductance, spectral, tv-mixing, averaging, size
  double tv_eps = 0.25;
  double avg_eps = 1e-3;
  AveragingMode avg_mode = AveragingMode::WorstCase;

  std::vector<int> sweep;  // generator size parameter, ascending
  std::uint64_t seed = 1;
  int workers = 1;
};

/// YAML document:
///   graph: {kind: grid, dim: 2}
///   chain: {kind: mh}
///   lift: {kind: hierarchical, radius: auto}
///   measure: {list: [size, tv-mixing], tv_eps: 0.25, avg_eps: 0.001, avg_mode: worst_case}
///   sweep: {n: [4, 8, 16], seed: 1, workers: 1}
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

struct PointRecord {
  int size_param = 0;
  bool ok = true;
  std::string error;
  Json measurements = Json::object();
  std::map<std::string, double> metrics;  // scalars used for slope fits
  Json chain_dump;                        // filled when dumping is requested
};

struct SlopeFit {
  int points = 0;
  std::optional<double> slope;
  std::optional<double> intercept;
  std::optional<double> residual;  // RMS of the log-log fit
};

/// OLS of log y on log x; omitted below three points.
SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

struct SweepReport {
  ExperimentConfig config;
  std::vector<PointRecord> points;
  std::map<std::string, SlopeFit> slopes;  // metric -> exponent in the node count

  bool all_ok() const;
};

struct RunOptions {
  bool dump = false;
};

SweepReport run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

Json to_json(const ExperimentConfig& c);
Json to_json(const SweepReport& r);

struct TableCell {
  std::optional<double> measured;
  std::optional<double> predicted;
};

struct ComparisonTable {
  std::vector<std::string> rows;     // mixing time, running time, size, total operations
  std::vector<std::string> columns;  // MH, pseudo-lifting, lifting (those present)
  std::map<std::pair<std::string, std::string>, TableCell> cells;

  std::string to_csv() const;
};

/// Exponents in n per row and lift family, beside the asymptotic predictions
/// for rings and d-dimensional grids.
ComparisonTable report_table(const std::vector<SweepReport>& reports);

}  // namespace liftedmix
