#include "rfstrack/bench.hpp"

#include <cmath>
#include <stdexcept>

namespace rfstrack {

Belief naive_update(const Belief& predicted, const std::vector<Eigen::VectorXd>& scan,
                    const MeasurementModel& meas, const ClutterModel& clutter,
                    const UpdateParams& params) {
  ClutterModel uniform_only = clutter;
  uniform_only.lambda_jam.clear();
  return update(predicted, scan, meas, uniform_only, nullptr, params);
}

GaussianComponent clairvoyant_step(const GaussianComponent& prior,
                                   const ScanSet& scan,
                                   const std::vector<double>& true_biases,
                                   const MeasurementModel& meas,
                                   const Eigen::Vector2d& radar_position) {
  const Eigen::VectorXd zero_offset = Eigen::VectorXd::Zero(meas.H.rows());
  GaussianComponent state = prior;
  // LOS is anchored at the prior predicted position for every correction.
  Eigen::Vector2d los{1.0, 0.0};
  bool have_los = false;

  for (const auto& p : scan.points) {
    if (p.kind == Provenance::target) {
      state = linear_gaussian_update(state, meas.H, zero_offset, meas.R,
                                     Eigen::VectorXd(p.z)).posterior;
    } else if (p.kind == Provenance::jammer) {
      if (!have_los) {
        los = los_unit_vector(prior.mean.head<2>(), radar_position);
        have_los = true;
      }
      const double b = true_biases.at(static_cast<std::size_t>(p.attack_index));
      const Eigen::Vector2d corrected = p.z - b * los;
      state = linear_gaussian_update(state, meas.H, zero_offset, meas.R,
                                     Eigen::VectorXd(corrected)).posterior;
    }
  }
  return state;
}

ClairvoyantTracker::ClairvoyantTracker(const MotionModel& motion,
                                       const MeasurementModel& meas,
                                       const Eigen::Vector2d& radar_position,
                                       const Eigen::Vector4d& prior_mean,
                                       const Eigen::Vector4d& prior_var)
    : motion_(motion), meas_(meas), radar_(radar_position) {
  state_.weight = 1.0;
  state_.mean = prior_mean;
  state_.cov = prior_var.asDiagonal();
}

Eigen::Vector2d ClairvoyantTracker::step(const ScanSet& scan,
                                         const TruthRecord& truth, int k) {
  state_.mean = motion_.F * state_.mean;
  state_.cov = symmetrize(motion_.F * state_.cov * motion_.F.transpose() + motion_.Q);

  std::vector<double> biases;
  const std::size_t n_attacks =
      truth.attack_bias.empty() ? 0 : truth.attack_bias.front().size();
  biases.reserve(n_attacks);
  for (std::size_t a = 0; a < n_attacks; ++a)
    biases.push_back(truth.attack_active(k, static_cast<int>(a))
                         ? truth.bias(k, static_cast<int>(a))
                         : 0.0);

  state_ = clairvoyant_step(state_, scan, biases, meas_, radar_);
  return state_.mean.head<2>();
}

PcrbCurve pcrb_curve(const MotionModel& motion, const MeasurementModel& meas,
                     const Eigen::MatrixXd& prior_cov, int n_steps, int pos_dims) {
  const Eigen::Index d = motion.F.rows();
  if (prior_cov.rows() != d || prior_cov.cols() != d)
    throw std::invalid_argument("pcrb_curve: prior covariance dimension mismatch");
  if (n_steps < 1) throw std::invalid_argument("pcrb_curve: n_steps < 1");

  auto spd_inverse = [](const Eigen::MatrixXd& m) {
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success)
      throw std::domain_error("pcrb_curve: singular information matrix");
    return symmetrize(llt.solve(Eigen::MatrixXd::Identity(m.rows(), m.cols())));
  };

  const Eigen::MatrixXd meas_info =
      meas.H.transpose() * spd_inverse(meas.R) * meas.H;

  PcrbCurve out;
  out.info.reserve(static_cast<std::size_t>(n_steps));
  out.bound_m.reserve(static_cast<std::size_t>(n_steps));

  Eigen::MatrixXd J = spd_inverse(prior_cov);
  for (int k = 1; k <= n_steps; ++k) {
    const Eigen::MatrixXd pred_cov =
        symmetrize(motion.F * spd_inverse(J) * motion.F.transpose() + motion.Q);
    J = symmetrize(spd_inverse(pred_cov) + meas_info);
    const Eigen::MatrixXd cov = spd_inverse(J);
    out.info.push_back(J);
    out.bound_m.push_back(std::sqrt(cov.topLeftCorner(pos_dims, pos_dims).trace()));
  }
  return out;
}

}  // namespace rfstrack
