#pragma once

#include "rfstrack/sim.hpp"
#include "rfstrack/tracker.hpp"

#include <vector>

namespace rfstrack {

/// tracker::update restricted to the uniform-only clutter model (no jammer
/// components, no bias machinery).
Belief naive_update(const Belief& predicted, const std::vector<Eigen::VectorXd>& scan,
                    const MeasurementModel& meas, const ClutterModel& clutter,
                    const UpdateParams& params);

/// One oracle update: fuses the true target return and each jammer return
/// (after subtracting the known bias along the LOS from the prior predicted
/// position). Clutter is discarded; misdetections skip the update.
GaussianComponent clairvoyant_step(const GaussianComponent& prior,
                                   const ScanSet& scan,
                                   const std::vector<double>& true_biases,
                                   const MeasurementModel& meas,
                                   const Eigen::Vector2d& radar_position);

/// Clairvoyant baseline over a whole replica (no DA uncertainty).
class ClairvoyantTracker {
 public:
  ClairvoyantTracker(const MotionModel& motion, const MeasurementModel& meas,
                     const Eigen::Vector2d& radar_position,
                     const Eigen::Vector4d& prior_mean,
                     const Eigen::Vector4d& prior_var);

  /// Returns the post-update position estimate for step k.
  Eigen::Vector2d step(const ScanSet& scan, const TruthRecord& truth, int k);

  const GaussianComponent& state() const { return state_; }

 private:
  MotionModel motion_;
  MeasurementModel meas_;
  Eigen::Vector2d radar_;
  GaussianComponent state_;
};

/// Posterior Cramer-Rao bound of the clean linear-Gaussian problem.
struct PcrbCurve {
  std::vector<Eigen::MatrixXd> info;  // J_k, k = 1..n
  std::vector<double> bound_m;        // sqrt(trace of position block of J_k^-1)
};

PcrbCurve pcrb_curve(const MotionModel& motion, const MeasurementModel& meas,
                     const Eigen::MatrixXd& prior_cov, int n_steps,
                     int pos_dims = 2);

}  // namespace rfstrack
