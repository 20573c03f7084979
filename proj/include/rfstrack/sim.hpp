#pragma once

#include "rfstrack/models.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <vector>

namespace rfstrack {

/// One linear range-pull attack: deceptive range grows from zero at
/// start_step by pull_off_velocity meters per second until end_step.
struct AttackSchedule {
  int start_step = 1;
  int end_step = 100;  // inclusive
  double pull_off_velocity = 0.5;  // m/s, > 0
};

struct ScenarioConfig {
  int id = 1;
  int n_steps = 100;
  double delta = 0.5;  // s
  Eigen::Vector4d initial_state{450.0, 450.0, 8.0, 8.0};
  std::vector<int> turn_starts;
  double turn_accel = 3.0 * 9.81;  // m/s^2
  bool turn_clockwise = false;
  std::vector<AttackSchedule> attacks;
  double sigma_r = 2.23606797749979;  // sqrt(5) m
  double sigma_q = 2.23606797749979;  // tracker-assumed process noise std, m
  double p_d = 0.98;
  double p_j = 0.98;
  double clutter_density = 2e-5;  // m^-2
  Fov fov{0.0, 1000.0, 0.0, 1000.0};
  Eigen::Vector2d radar_position{0.0, 0.0};
  std::uint64_t seed = 1;

  double lambda0_bar() const { return clutter_density * fov.area(); }
};

/// Deceptive range offset of a linear RGPO attack at dwell time t_k.
double rgpo_bias(double v_po, double t_k, double t_0);

/// Ground truth: per-step state and per-(step, attack) bias. Biases are NaN
/// while an attack is inactive.
struct TruthRecord {
  std::vector<Eigen::Vector4d> states;             // index k-1 <-> step k
  std::vector<std::vector<double>> attack_bias;    // [k-1][attack]

  int n_steps() const { return static_cast<int>(states.size()); }
  bool attack_active(int step, int attack) const;
  double bias(int step, int attack) const;         // NaN if inactive
  /// Bias of the earliest-starting active attack, 0 when none (CSV column).
  double first_active_bias(int step) const;
};

/// Deterministic trajectory: constant velocity except during turns, which
/// rotate the velocity by omega*delta per step with omega = accel / speed
/// for ceil((pi/2) / (omega*delta)) steps. Throws if the path leaves the FOV.
TruthRecord generate_trajectory(const ScenarioConfig& cfg);

enum class Provenance { target, jammer, clutter };

struct ScanPoint {
  Eigen::Vector2d z;
  Provenance kind = Provenance::clutter;
  int attack_index = -1;  // for jammer points
};

/// Unordered measurement set of one step. Provenance is retained for the
/// oracle baselines only; trackers must consume measurements().
struct ScanSet {
  std::vector<ScanPoint> points;

  std::vector<Eigen::Vector2d> positions() const;
  std::vector<Eigen::VectorXd> measurements() const;
};

ScanSet generate_scan(const TruthRecord& truth, int step,
                      const ScenarioConfig& cfg, std::mt19937_64& rng);

/// The four study scenarios.
std::vector<ScenarioConfig> preset_scenarios();
ScenarioConfig preset_scenario(int id);

}  // namespace rfstrack
