#pragma once

#include "rfstrack/metrics.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rfstrack {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Fully resolved experiment: scenario preset plus overrides plus tracker
/// tuning. Built by load_experiment_config.
struct ExperimentConfig {
  int scenario_id = 1;
  int runs = 100;
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  std::vector<TrackerSpec> trackers;
  std::string component_mode = "auto";  // auto | single | dynamic
  ScenarioConfig scenario;
  ProtectionParams prot;
};

/// Values passed on the command line; they override file keys.
struct CliOverrides {
  std::optional<int> scenario;
  std::optional<int> runs;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::vector<std::string> trackers;
};

/// Parse the flat key-value config file (empty path: defaults only) and apply
/// command-line overrides. Unknown keys and malformed values raise
/// ConfigError with file/line diagnostics.
ExperimentConfig load_experiment_config(const std::string& path,
                                        const CliOverrides& overrides);

/// Echo of every resolved config value, in the config file format.
std::string config_used_text(const ExperimentConfig& cfg);

void write_metrics_csv(const std::string& path, const AggregateTable& table);

/// Column-indexed reload of a metrics CSV for replotting.
struct PlotData {
  std::vector<double> steps;
  std::vector<std::string> trackers;
  // tracker -> column -> per-step values
  std::map<std::string, std::map<std::string, std::vector<double>>> series;
  std::vector<double> bias_true;
  std::vector<double> pcrb;
  bool has_pcrb = false;
};

PlotData read_metrics_csv(const std::string& path);

void write_plots(const PlotData& data, const std::string& out_dir);

int cmd_run(const ExperimentConfig& cfg);
int cmd_loe(ExperimentConfig cfg);
int cmd_plot(const std::string& csv_path, const std::string& out_dir);

}  // namespace rfstrack
