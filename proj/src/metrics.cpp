#include "rfstrack/metrics.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace rfstrack {

TrackerChoice tracker_choice_from_label(const std::string& label) {
  if (label == "adaptive") return TrackerChoice::adaptive;
  if (label == "nonadaptive") return TrackerChoice::nonadaptive;
  if (label == "naive") return TrackerChoice::naive;
  if (label == "clairvoyant") return TrackerChoice::clairvoyant;
  throw std::invalid_argument("unknown tracker '" + label + "'");
}

std::string to_label(TrackerChoice kind) {
  switch (kind) {
    case TrackerChoice::adaptive: return "adaptive";
    case TrackerChoice::nonadaptive: return "nonadaptive";
    case TrackerChoice::naive: return "naive";
    case TrackerChoice::clairvoyant: return "clairvoyant";
  }
  return "?";
}

std::vector<double> position_rmse(
    const std::vector<std::vector<Eigen::Vector2d>>& estimates_per_replica,
    const std::vector<Eigen::Vector2d>& truth_positions) {
  if (estimates_per_replica.empty())
    throw std::invalid_argument("position_rmse: no replicas");
  const std::size_t n = truth_positions.size();
  for (const auto& series : estimates_per_replica)
    if (series.size() != n)
      throw std::invalid_argument("position_rmse: series length mismatch");

  std::vector<double> rmse(n, 0.0);
  for (const auto& series : estimates_per_replica)
    for (std::size_t k = 0; k < n; ++k)
      rmse[k] += (series[k] - truth_positions[k]).squaredNorm();
  const double inv = 1.0 / static_cast<double>(estimates_per_replica.size());
  for (auto& v : rmse) v = std::sqrt(v * inv);
  return rmse;
}

TrackerSetup make_tracker_setup(TrackerChoice kind, const ScenarioConfig& cfg,
                                const ProtectionParams& prot) {
  if (kind == TrackerChoice::clairvoyant)
    throw std::invalid_argument("make_tracker_setup: clairvoyant is not an RfsTracker");
  TrackerSetup setup;
  switch (kind) {
    case TrackerChoice::adaptive: setup.kind = TrackerKind::adaptive; break;
    case TrackerChoice::nonadaptive: setup.kind = TrackerKind::nonadaptive; break;
    default: setup.kind = TrackerKind::naive; break;
  }
  setup.delta = cfg.delta;
  setup.sigma_q = cfg.sigma_q;
  setup.sigma_r = cfg.sigma_r;
  setup.p_d = cfg.p_d;
  setup.lambda0_bar = cfg.lambda0_bar();
  setup.fov = cfg.fov;
  setup.radar_position = cfg.radar_position;
  setup.prot = prot;
  return setup;
}

namespace {

std::vector<RunRecord> run_replica(const ScenarioConfig& cfg,
                                   const ProtectionParams& prot,
                                   const std::vector<TrackerSpec>& trackers,
                                   const TruthRecord& truth, int replica,
                                   std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<ScanSet> scans;
  scans.reserve(static_cast<std::size_t>(cfg.n_steps));
  for (int k = 1; k <= cfg.n_steps; ++k)
    scans.push_back(generate_scan(truth, k, cfg, rng));

  std::vector<RunRecord> out;
  out.reserve(trackers.size());
  for (const TrackerSpec& spec : trackers) {
    RunRecord rec;
    rec.replica = replica;
    rec.steps.reserve(static_cast<std::size_t>(cfg.n_steps));
    if (spec.kind == TrackerChoice::clairvoyant) {
      ClairvoyantTracker tracker(
          build_cv_model(cfg.delta, cfg.sigma_q, prot.alpha, 0),
          build_position_measurement(4, cfg.sigma_r), cfg.radar_position,
          prot.prior_mean, prot.prior_var);
      for (int k = 1; k <= cfg.n_steps; ++k) {
        StepRecord step;
        step.position = tracker.step(scans[static_cast<std::size_t>(k - 1)], truth, k);
        rec.steps.push_back(step);
      }
    } else {
      RfsTracker tracker(make_tracker_setup(spec.kind, cfg, prot));
      for (int k = 1; k <= cfg.n_steps; ++k) {
        const TrackerStep ts =
            tracker.step(scans[static_cast<std::size_t>(k - 1)].positions());
        StepRecord step;
        step.position = ts.position;
        step.p_jam = ts.p_jam;
        step.bias_mean = ts.bias_mean;
        step.bias_std = ts.bias_std;
        step.c_awake = ts.c_awake;
        rec.steps.push_back(step);
      }
    }
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace

AggregateTable aggregate_records(
    const TruthRecord& truth, const std::vector<TrackerSpec>& trackers,
    const std::vector<std::vector<RunRecord>>& records_per_tracker,
    bool keep_records) {
  if (records_per_tracker.size() != trackers.size())
    throw std::invalid_argument("aggregate_records: tracker count mismatch");

  const int n_steps = truth.n_steps();
  AggregateTable table;
  table.n_steps = n_steps;
  table.n_runs = records_per_tracker.empty()
                     ? 0
                     : static_cast<int>(records_per_tracker.front().size());
  table.bias_true_m.reserve(static_cast<std::size_t>(n_steps));
  for (int k = 1; k <= n_steps; ++k)
    table.bias_true_m.push_back(truth.first_active_bias(k));

  std::vector<Eigen::Vector2d> truth_pos;
  truth_pos.reserve(static_cast<std::size_t>(n_steps));
  for (const auto& x : truth.states) truth_pos.push_back(x.head<2>());

  for (std::size_t t = 0; t < trackers.size(); ++t) {
    const auto& records = records_per_tracker[t];
    if (records.empty())
      throw std::invalid_argument("aggregate_records: no replicas for tracker");
    TrackerAggregate agg;
    agg.label = trackers[t].label;

    std::vector<std::vector<Eigen::Vector2d>> estimates;
    estimates.reserve(records.size());
    for (const auto& rec : records) {
      if (static_cast<int>(rec.steps.size()) != n_steps)
        throw std::invalid_argument("aggregate_records: record length mismatch");
      std::vector<Eigen::Vector2d> series;
      series.reserve(rec.steps.size());
      for (const auto& s : rec.steps) series.push_back(s.position);
      estimates.push_back(std::move(series));
    }
    agg.rmse_m = position_rmse(estimates, truth_pos);

    const double inv = 1.0 / static_cast<double>(records.size());
    agg.p_jam_mean.assign(static_cast<std::size_t>(n_steps), 0.0);
    agg.bias_est_mean.assign(static_cast<std::size_t>(n_steps), 0.0);
    agg.bias_std_mean.assign(static_cast<std::size_t>(n_steps), 0.0);
    agg.c_awake_mean.assign(static_cast<std::size_t>(n_steps), 0.0);
    for (const auto& rec : records) {
      for (int k = 0; k < n_steps; ++k) {
        const auto& s = rec.steps[static_cast<std::size_t>(k)];
        agg.p_jam_mean[static_cast<std::size_t>(k)] += s.p_jam * inv;
        agg.bias_est_mean[static_cast<std::size_t>(k)] += s.bias_mean * inv;
        agg.bias_std_mean[static_cast<std::size_t>(k)] += s.bias_std * inv;
        agg.c_awake_mean[static_cast<std::size_t>(k)] += s.c_awake * inv;
      }
    }
    if (keep_records) agg.records = records;
    table.trackers.push_back(std::move(agg));
  }
  return table;
}

int resolve_thread_count(int requested, int n_runs) {
  int threads = requested;
  if (threads <= 0) {
    if (const char* env = std::getenv("RGPO_THREADS")) {
      threads = std::atoi(env);
    }
  }
  if (threads <= 0)
    threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads <= 0) threads = 1;
  return std::min(threads, std::max(1, n_runs));
}

AggregateTable run_monte_carlo(const ScenarioConfig& cfg,
                               const ProtectionParams& prot,
                               const std::vector<TrackerSpec>& trackers,
                               int n_runs, std::uint64_t base_seed,
                               const MonteCarloOptions& options) {
  if (n_runs < 1) throw std::invalid_argument("run_monte_carlo: n_runs < 1");
  if (trackers.empty()) throw std::invalid_argument("run_monte_carlo: no trackers");

  const TruthRecord truth = generate_trajectory(cfg);

  std::vector<std::vector<RunRecord>> records(
      trackers.size(), std::vector<RunRecord>(static_cast<std::size_t>(n_runs)));

  const int n_threads = resolve_thread_count(options.threads, n_runs);
  std::atomic<int> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;

  auto worker = [&]() {
    for (;;) {
      const int r = next.fetch_add(1);
      if (r >= n_runs) return;
      try {
        auto rec = run_replica(cfg, prot, trackers, truth, r,
                               base_seed + static_cast<std::uint64_t>(r));
        for (std::size_t t = 0; t < trackers.size(); ++t)
          records[t][static_cast<std::size_t>(r)] = std::move(rec[t]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };

  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);

  return aggregate_records(truth, trackers, records, options.keep_records);
}

}  // namespace rfstrack
