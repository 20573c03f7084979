#pragma once

#include "rfstrack/bench.hpp"
#include "rfstrack/sim.hpp"
#include "rfstrack/tracker.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace rfstrack {

enum class TrackerChoice { adaptive, nonadaptive, naive, clairvoyant };

TrackerChoice tracker_choice_from_label(const std::string& label);
std::string to_label(TrackerChoice kind);

struct TrackerSpec {
  std::string label;
  TrackerChoice kind = TrackerChoice::adaptive;
};

struct StepRecord {
  Eigen::Vector2d position{0.0, 0.0};
  double p_jam = 0.0;
  double bias_mean = 0.0;
  double bias_std = 0.0;
  int c_awake = 0;
};

/// One tracker over one replica.
struct RunRecord {
  int replica = 0;
  std::vector<StepRecord> steps;
};

struct TrackerAggregate {
  std::string label;
  std::vector<double> rmse_m;
  std::vector<double> p_jam_mean;
  std::vector<double> bias_est_mean;
  std::vector<double> bias_std_mean;
  std::vector<double> c_awake_mean;
  std::vector<RunRecord> records;  // kept only on request
};

struct AggregateTable {
  int n_steps = 0;
  int n_runs = 0;
  std::vector<double> bias_true_m;  // earliest active attack per step
  std::vector<TrackerAggregate> trackers;
  std::vector<double> pcrb_m;  // filled by LoE runs
};

/// Per-step RMSE over replicas: sqrt(mean ||estimate - truth||^2).
std::vector<double> position_rmse(
    const std::vector<std::vector<Eigen::Vector2d>>& estimates_per_replica,
    const std::vector<Eigen::Vector2d>& truth_positions);

/// Deterministic reduction of per-replica records (order independent).
AggregateTable aggregate_records(
    const TruthRecord& truth, const std::vector<TrackerSpec>& trackers,
    const std::vector<std::vector<RunRecord>>& records_per_tracker,
    bool keep_records);

struct MonteCarloOptions {
  int threads = 0;  // 0: RGPO_THREADS env var, else hardware concurrency
  bool keep_records = false;
};

/// Shared-scan Monte Carlo study: one deterministic trajectory, independent
/// scans per replica (seeded base_seed + replica), every tracker consuming
/// the same scans within a replica.
AggregateTable run_monte_carlo(const ScenarioConfig& cfg,
                               const ProtectionParams& prot,
                               const std::vector<TrackerSpec>& trackers,
                               int n_runs, std::uint64_t base_seed,
                               const MonteCarloOptions& options = {});

/// TrackerSetup for one of the protected/naive variants under a scenario.
TrackerSetup make_tracker_setup(TrackerChoice kind, const ScenarioConfig& cfg,
                                const ProtectionParams& prot);

int resolve_thread_count(int requested, int n_runs);

}  // namespace rfstrack
