#include "rfstrack/sim.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace rfstrack {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

double rgpo_bias(double v_po, double t_k, double t_0) {
  if (t_k < t_0) throw std::invalid_argument("rgpo_bias: t_k before attack start");
  return v_po * (t_k - t_0);
}

bool TruthRecord::attack_active(int step, int attack) const {
  return !std::isnan(bias(step, attack));
}

double TruthRecord::bias(int step, int attack) const {
  return attack_bias.at(static_cast<std::size_t>(step - 1))
      .at(static_cast<std::size_t>(attack));
}

double TruthRecord::first_active_bias(int step) const {
  const auto& row = attack_bias.at(static_cast<std::size_t>(step - 1));
  for (double b : row)
    if (!std::isnan(b)) return b;
  return 0.0;
}

namespace {

Eigen::Vector4d cv_step(const Eigen::Vector4d& x, double delta) {
  Eigen::Vector4d out = x;
  out.head<2>() += delta * x.tail<2>();
  return out;
}

// Coordinated turn with rate omega (rad/s, sign = direction).
Eigen::Vector4d turn_step(const Eigen::Vector4d& x, double delta, double omega) {
  const double th = omega * delta;
  const double s = std::sin(th);
  const double c = std::cos(th);
  Eigen::Vector4d out;
  out(0) = x(0) + s / omega * x(2) - (1.0 - c) / omega * x(3);
  out(1) = x(1) + (1.0 - c) / omega * x(2) + s / omega * x(3);
  out(2) = c * x(2) - s * x(3);
  out(3) = s * x(2) + c * x(3);
  return out;
}

}  // namespace

TruthRecord generate_trajectory(const ScenarioConfig& cfg) {
  if (cfg.n_steps < 1) throw std::invalid_argument("generate_trajectory: n_steps < 1");

  TruthRecord truth;
  truth.states.reserve(static_cast<std::size_t>(cfg.n_steps));
  truth.states.push_back(cfg.initial_state);

  // Remaining turn steps and the rate locked in at turn entry.
  int turn_remaining = 0;
  double omega = 0.0;

  for (int k = 1; k < cfg.n_steps; ++k) {
    const Eigen::Vector4d& x = truth.states.back();
    for (int start : cfg.turn_starts) {
      if (start == k) {
        const double speed = x.tail<2>().norm();
        if (speed <= 0.0)
          throw std::domain_error("generate_trajectory: turning at zero speed");
        omega = cfg.turn_accel / speed;
        if (cfg.turn_clockwise) omega = -omega;
        turn_remaining = static_cast<int>(
            std::ceil((M_PI / 2.0) / (std::abs(omega) * cfg.delta)));
      }
    }
    Eigen::Vector4d next;
    if (turn_remaining > 0) {
      next = turn_step(x, cfg.delta, omega);
      --turn_remaining;
    } else {
      next = cv_step(x, cfg.delta);
    }
    if (!cfg.fov.contains(next.head<2>()))
      throw std::runtime_error("generate_trajectory: trajectory exits FOV at step " +
                               std::to_string(k + 1));
    truth.states.push_back(next);
  }

  truth.attack_bias.assign(static_cast<std::size_t>(cfg.n_steps),
                           std::vector<double>(cfg.attacks.size(), kNaN));
  for (std::size_t a = 0; a < cfg.attacks.size(); ++a) {
    const AttackSchedule& at = cfg.attacks[a];
    if (at.start_step >= at.end_step)
      throw std::invalid_argument("generate_trajectory: attack start must precede end");
    if (at.pull_off_velocity <= 0.0)
      throw std::invalid_argument("generate_trajectory: pull-off velocity must be > 0");
    for (int k = at.start_step; k <= std::min(at.end_step, cfg.n_steps); ++k) {
      if (k < 1) continue;
      truth.attack_bias[static_cast<std::size_t>(k - 1)][a] =
          rgpo_bias(at.pull_off_velocity, k * cfg.delta, at.start_step * cfg.delta);
    }
  }
  return truth;
}

std::vector<Eigen::Vector2d> ScanSet::positions() const {
  std::vector<Eigen::Vector2d> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.z);
  return out;
}

std::vector<Eigen::VectorXd> ScanSet::measurements() const {
  std::vector<Eigen::VectorXd> out;
  out.reserve(points.size());
  for (const auto& p : points) out.emplace_back(p.z);
  return out;
}

namespace {

Eigen::Vector2d draw_in_fov(const Eigen::Vector2d& mean, double sigma,
                            const Fov& fov, std::mt19937_64& rng) {
  std::normal_distribution<double> noise(0.0, sigma);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Eigen::Vector2d z = mean + Eigen::Vector2d(noise(rng), noise(rng));
    if (fov.contains(z)) return z;
  }
  // Mean is essentially outside the FOV; fall back to the nearest edge.
  return {std::clamp(mean.x(), fov.xmin, fov.xmax),
          std::clamp(mean.y(), fov.ymin, fov.ymax)};
}

}  // namespace

ScanSet generate_scan(const TruthRecord& truth, int step,
                      const ScenarioConfig& cfg, std::mt19937_64& rng) {
  if (step < 1 || step > truth.n_steps())
    throw std::invalid_argument("generate_scan: step out of range");

  const Eigen::Vector2d pos =
      truth.states[static_cast<std::size_t>(step - 1)].head<2>();
  std::bernoulli_distribution detect_target(cfg.p_d);
  std::bernoulli_distribution detect_jammer(cfg.p_j);

  ScanSet scan;
  if (detect_target(rng))
    scan.points.push_back({draw_in_fov(pos, cfg.sigma_r, cfg.fov, rng),
                           Provenance::target, -1});

  for (std::size_t a = 0; a < cfg.attacks.size(); ++a) {
    if (!truth.attack_active(step, static_cast<int>(a))) continue;
    if (!detect_jammer(rng)) continue;
    const Eigen::Vector2d los = los_unit_vector(pos, cfg.radar_position);
    const Eigen::Vector2d jam_pos = pos + truth.bias(step, static_cast<int>(a)) * los;
    scan.points.push_back({draw_in_fov(jam_pos, cfg.sigma_r, cfg.fov, rng),
                           Provenance::jammer, static_cast<int>(a)});
  }

  std::poisson_distribution<int> clutter_count(cfg.lambda0_bar());
  std::uniform_real_distribution<double> ux(cfg.fov.xmin, cfg.fov.xmax);
  std::uniform_real_distribution<double> uy(cfg.fov.ymin, cfg.fov.ymax);
  const int n_clutter = clutter_count(rng);
  for (int i = 0; i < n_clutter; ++i)
    scan.points.push_back({{ux(rng), uy(rng)}, Provenance::clutter, -1});
  return scan;
}

std::vector<ScenarioConfig> preset_scenarios() {
  std::vector<ScenarioConfig> out(4);

  ScenarioConfig& s1 = out[0];
  s1.id = 1;
  s1.attacks = {{10, 75, 0.5}, {85, 100, 0.5}};

  ScenarioConfig& s2 = out[1];
  s2.id = 2;
  s2.turn_starts = {10, 40, 70};
  s2.sigma_q = std::sqrt(40.0);
  s2.attacks = {{10, 100, 5.0}};

  ScenarioConfig& s3 = out[2];
  s3.id = 3;
  s3.attacks = {{1, 50, 5.0}, {15, 75, 3.0}, {85, 100, 3.0}};

  ScenarioConfig& s4 = out[3];
  s4.id = 4;
  s4.turn_starts = {10, 40, 70};
  s4.sigma_q = std::sqrt(40.0);
  s4.attacks = {{1, 60, 5.0}, {40, 80, 3.0}};

  return out;
}

ScenarioConfig preset_scenario(int id) {
  if (id < 1 || id > 4)
    throw std::invalid_argument("preset_scenario: id must be 1..4");
  return preset_scenarios()[static_cast<std::size_t>(id - 1)];
}

}  // namespace rfstrack
