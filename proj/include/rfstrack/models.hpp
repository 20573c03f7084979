#pragma once

#include <Eigen/Dense>

#include <vector>

namespace rfstrack {

/// Constant-velocity transition model over [px, py, vx, vy, b_1..b_n].
/// Bias coordinates follow independent random walks scaled by alpha.
struct MotionModel {
  Eigen::MatrixXd F;
  Eigen::MatrixXd Q;
  double delta = 0.0;    // sampling period, s
  double sigma_q = 0.0;  // process noise std, m
  double alpha = 0.0;    // bias noise scale
  int n_bias = 0;

  int dim() const { return static_cast<int>(F.rows()); }
};

MotionModel build_cv_model(double delta, double sigma_q, double alpha, int n_bias);

/// Position-selecting linear observation with isotropic noise.
struct MeasurementModel {
  Eigen::MatrixXd H;
  Eigen::MatrixXd R;
};

MeasurementModel build_position_measurement(int state_dim, double sigma_r);

/// Unit vector from the radar to a position. Throws on zero range.
Eigen::Vector2d los_unit_vector(const Eigen::Vector2d& position,
                                const Eigen::Vector2d& radar_position);

/// Linear observation of a jammer-induced return: z ~ N(B x + offset, D).
struct JammerObservation {
  Eigen::MatrixXd obs;      // B
  Eigen::VectorXd offset;   // zero for the adaptive variants
  Eigen::MatrixXd noise;    // D
  int component_index = 0;  // 1-based clutter-mixture slot
};

/// Adaptive variant: the LOS column sits at the bias coordinate of the
/// indexed component, so the bias state is observed along the LOS ray.
JammerObservation build_jammer_obs_adaptive(const Eigen::Vector2d& los,
                                            int component_index, int c_total,
                                            const MeasurementModel& meas);

/// Non-adaptive variant: fixed bias offset along the LOS, covariance
/// flattened along the LOS with the given eigenvalues.
JammerObservation build_jammer_obs_nonadaptive(const Eigen::Vector2d& los,
                                               double b_na,
                                               const Eigen::Vector2d& eigvals);

struct Fov {
  double xmin = 0.0, xmax = 1000.0, ymin = 0.0, ymax = 1000.0;

  double area() const { return (xmax - xmin) * (ymax - ymin); }
  bool contains(const Eigen::Vector2d& p) const {
    return p.x() >= xmin && p.x() <= xmax && p.y() >= ymin && p.y() <= ymax;
  }
};

/// Rates of the Poisson clutter-plus-jammer model. Slot 0 is uniform
/// clutter over the FOV; slots 1..C are the jammer-return components.
struct ClutterModel {
  double lambda0_bar = 0.0;
  std::vector<double> lambda_jam;
  Fov fov;

  double uniform_density() const { return 1.0 / fov.area(); }
  double total_rate() const;
  int jammer_component_count() const { return static_cast<int>(lambda_jam.size()); }
};

/// Normalized weights w_0..w_C of the clutter density mixture.
Eigen::VectorXd clutter_mixture_weights(const ClutterModel& cm);

}  // namespace rfstrack
