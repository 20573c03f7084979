#include "rfstrack/models.hpp"

#include <cmath>
#include <stdexcept>

namespace rfstrack {

MotionModel build_cv_model(double delta, double sigma_q, double alpha, int n_bias) {
  if (delta <= 0.0) throw std::invalid_argument("build_cv_model: delta must be > 0");
  if (n_bias < 0) throw std::invalid_argument("build_cv_model: n_bias must be >= 0");

  const int d = 4 + n_bias;
  MotionModel m;
  m.delta = delta;
  m.sigma_q = sigma_q;
  m.alpha = alpha;
  m.n_bias = n_bias;

  m.F = Eigen::MatrixXd::Identity(d, d);
  m.F(0, 2) = delta;
  m.F(1, 3) = delta;

  const double q2 = sigma_q * sigma_q;
  m.Q = Eigen::MatrixXd::Zero(d, d);
  const double d2 = delta * delta;
  m.Q.block(0, 0, 2, 2) = q2 * d2 * d2 / 4.0 * Eigen::Matrix2d::Identity();
  m.Q.block(0, 2, 2, 2) = q2 * d2 * delta / 2.0 * Eigen::Matrix2d::Identity();
  m.Q.block(2, 0, 2, 2) = m.Q.block(0, 2, 2, 2);
  m.Q.block(2, 2, 2, 2) = q2 * d2 * Eigen::Matrix2d::Identity();
  for (int i = 0; i < n_bias; ++i) m.Q(4 + i, 4 + i) = q2 * alpha * delta;
  return m;
}

MeasurementModel build_position_measurement(int state_dim, double sigma_r) {
  if (state_dim < 2)
    throw std::invalid_argument("build_position_measurement: state_dim must be >= 2");
  MeasurementModel mm;
  mm.H = Eigen::MatrixXd::Zero(2, state_dim);
  mm.H(0, 0) = 1.0;
  mm.H(1, 1) = 1.0;
  mm.R = sigma_r * sigma_r * Eigen::Matrix2d::Identity();
  return mm;
}

Eigen::Vector2d los_unit_vector(const Eigen::Vector2d& position,
                                const Eigen::Vector2d& radar_position) {
  const Eigen::Vector2d diff = position - radar_position;
  const double range = diff.norm();
  if (range <= 0.0)
    throw std::domain_error("los_unit_vector: radar co-located with position");
  return diff / range;
}

JammerObservation build_jammer_obs_adaptive(const Eigen::Vector2d& los,
                                            int component_index, int c_total,
                                            const MeasurementModel& meas) {
  if (component_index < 1 || component_index > c_total)
    throw std::invalid_argument("build_jammer_obs_adaptive: component index out of range");

  JammerObservation jo;
  jo.component_index = component_index;
  jo.obs = Eigen::MatrixXd::Zero(2, 4 + c_total);
  jo.obs(0, 0) = 1.0;
  jo.obs(1, 1) = 1.0;
  jo.obs.col(4 + component_index - 1) = los;
  jo.offset = Eigen::Vector2d::Zero();
  jo.noise = meas.R;
  return jo;
}

JammerObservation build_jammer_obs_nonadaptive(const Eigen::Vector2d& los,
                                               double b_na,
                                               const Eigen::Vector2d& eigvals) {
  if (b_na < 0.0)
    throw std::invalid_argument("build_jammer_obs_nonadaptive: b_na must be >= 0");
  if (eigvals.minCoeff() <= 0.0)
    throw std::invalid_argument("build_jammer_obs_nonadaptive: eigenvalues must be > 0");

  JammerObservation jo;
  jo.component_index = 1;
  jo.obs = Eigen::MatrixXd::Zero(2, 4);
  jo.obs(0, 0) = 1.0;
  jo.obs(1, 1) = 1.0;
  jo.offset = b_na * los;

  Eigen::Matrix2d basis;
  basis.col(0) = los;
  basis.col(1) = Eigen::Vector2d(-los.y(), los.x());  // +90 degrees
  jo.noise = basis * eigvals.asDiagonal() * basis.transpose();
  jo.noise = 0.5 * (jo.noise + jo.noise.transpose());
  return jo;
}

double ClutterModel::total_rate() const {
  double s = lambda0_bar;
  for (double r : lambda_jam) s += r;
  return s;
}

Eigen::VectorXd clutter_mixture_weights(const ClutterModel& cm) {
  const double total = cm.total_rate();
  if (!(total > 0.0))
    throw std::domain_error("clutter_mixture_weights: all rates are zero");
  Eigen::VectorXd w(1 + cm.jammer_component_count());
  w(0) = cm.lambda0_bar / total;
  for (int i = 0; i < cm.jammer_component_count(); ++i)
    w(1 + i) = cm.lambda_jam[static_cast<std::size_t>(i)] / total;
  return w;
}

}  // namespace rfstrack
