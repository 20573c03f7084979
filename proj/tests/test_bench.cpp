#include "rfstrack/bench.hpp"

#include "support/grid_oracle.hpp"
#include "support/test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace rfstrack;
using namespace rfstrack::testing;

TEST_SUITE("bench") {

TEST_CASE("naive_update equals update with zero jammer rates") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 5; ++trial) {
    GridProblem prob = random_grid_problem(rng, /*c_max=*/0);
    GridTrackerParts parts = make_tracker_parts(prob);

    ClutterModel with_zero_rates = parts.clutter;
    with_zero_rates.lambda_jam = {0.0, 0.0};
    // jammer branches with zero rate carry -inf log factors and never expand
    const Belief via_update = update(parts.predicted, parts.scan, parts.meas,
                                     with_zero_rates, parts.builder, parts.params);
    const Belief via_naive = naive_update(parts.predicted, parts.scan, parts.meas,
                                          with_zero_rates, parts.params);
    REQUIRE(via_update.mixture.size() == via_naive.mixture.size());
    for (std::size_t i = 0; i < via_update.mixture.size(); ++i) {
      const auto& a = via_update.mixture.components[i];
      const auto& b = via_naive.mixture.components[i];
      CHECK(a.weight == doctest::Approx(b.weight).epsilon(1e-12));
      CHECK((a.mean - b.mean).norm() < 1e-12 * (1.0 + a.mean.norm()));
      CHECK((a.cov - b.cov).norm() < 1e-12 * (1.0 + a.cov.norm()));
    }
  }
}

TEST_CASE("naive_update preserves the prior on an empty scan") {
  std::mt19937_64 rng(59);
  Belief b;
  b.base_dim = 4;
  b.mixture.dim = 4;
  b.mixture.components.push_back(
      {1.0, Eigen::VectorXd::Zero(4), random_spd(4, rng), 0});
  ClutterModel clutter;
  clutter.lambda0_bar = 20.0;
  const Belief out = naive_update(b, {}, build_position_measurement(4, 1.0),
                                  clutter, UpdateParams{});
  CHECK((out.mixture.components[0].mean - b.mixture.components[0].mean).norm() == 0.0);
}

TEST_CASE("naive_update single clean measurement approaches the Kalman posterior") {
  // as lambda0 -> 0 the detection hypothesis takes all the weight
  Eigen::VectorXd mean(4);
  mean << 50.0, 60.0, 1.0, 1.0;
  Belief b;
  b.base_dim = 4;
  b.mixture.dim = 4;
  b.mixture.components.push_back(
      {1.0, mean, Eigen::Vector4d(16.0, 16.0, 4.0, 4.0).asDiagonal(), 0});

  const double sigma_r = 2.0;
  const MeasurementModel meas = build_position_measurement(4, sigma_r);
  ClutterModel clutter;
  clutter.lambda0_bar = 1e-12;
  clutter.fov = {0.0, 1000.0, 0.0, 1000.0};

  UpdateParams params;
  params.p_d = 0.9;
  params.prune_threshold = 0.0;
  params.cap = 10;

  const Eigen::Vector2d z(55.0, 58.0);
  std::vector<Eigen::VectorXd> scan;
  scan.emplace_back(z);
  const Belief out = naive_update(b, scan, meas, clutter, params);
  const Moments mom = mixture_moments(out.mixture);

  // scalar Kalman per axis: k = 16 / (16 + 4)
  const double k = 16.0 / 20.0;
  CHECK(mom.mean(0) == doctest::Approx(50.0 + k * 5.0).epsilon(1e-6));
  CHECK(mom.mean(1) == doctest::Approx(60.0 - k * 2.0).epsilon(1e-6));
  CHECK(mom.cov(0, 0) == doctest::Approx((1.0 - k) * 16.0).epsilon(1e-6));
}

TEST_CASE("clairvoyant_step") {
  GaussianComponent prior;
  prior.weight = 1.0;
  prior.mean = Eigen::VectorXd(4);
  prior.mean << 100.0, 100.0, 5.0, 5.0;
  prior.cov = Eigen::Vector4d(25.0, 25.0, 4.0, 4.0).asDiagonal();
  const MeasurementModel meas = build_position_measurement(4, std::sqrt(5.0));
  const Eigen::Vector2d radar(0.0, 0.0);

  SUBCASE("target-only scan is a plain Kalman update") {
    ScanSet scan;
    scan.points.push_back({{103.0, 98.0}, Provenance::target, -1});
    const GaussianComponent post = clairvoyant_step(prior, scan, {}, meas, radar);
    const auto expect =
        linear_gaussian_update(prior, meas.H, Eigen::VectorXd::Zero(2), meas.R,
                               Eigen::VectorXd(Eigen::Vector2d(103.0, 98.0)));
    CHECK((post.mean - expect.posterior.mean).norm() < 1e-12);
    CHECK((post.cov - expect.posterior.cov).norm() < 1e-12);
  }
  SUBCASE("a jammer return shrinks the posterior further") {
    ScanSet target_only;
    target_only.points.push_back({{103.0, 98.0}, Provenance::target, -1});
    const GaussianComponent a = clairvoyant_step(prior, target_only, {}, meas, radar);

    ScanSet both = target_only;
    const Eigen::Vector2d los = los_unit_vector(prior.mean.head<2>(), radar);
    const Eigen::Vector2d jam = Eigen::Vector2d(103.0, 98.0) + 30.0 * los;
    both.points.push_back({jam, Provenance::jammer, 0});
    const GaussianComponent b = clairvoyant_step(prior, both, {30.0}, meas, radar);

    CHECK(b.cov.trace() < a.cov.trace());
    // bias-corrected return lands on the target, so the mean barely moves
    CHECK((b.mean.head<2>() - a.mean.head<2>()).norm() < 1.0);
  }
  SUBCASE("clutter is ignored, misdetection keeps the prior") {
    ScanSet scan;
    scan.points.push_back({{700.0, 200.0}, Provenance::clutter, -1});
    const GaussianComponent post = clairvoyant_step(prior, scan, {}, meas, radar);
    CHECK((post.mean - prior.mean).norm() == 0.0);
    CHECK((post.cov - prior.cov).norm() == 0.0);
  }
}

TEST_CASE("pcrb static scalar closed form") {
  // F = 1, Q = 0, H = 1, R = 1, P0 = 1: J_k = 1 + k
  MotionModel motion;
  motion.F = mat1(1.0);
  motion.Q = mat1(0.0);
  MeasurementModel meas;
  meas.H = mat1(1.0);
  meas.R = mat1(1.0);
  const PcrbCurve curve = pcrb_curve(motion, meas, mat1(1.0), 25, 1);
  REQUIRE(curve.bound_m.size() == 25);
  for (int k = 1; k <= 25; ++k) {
    CHECK(curve.info[static_cast<std::size_t>(k - 1)](0, 0) ==
          doctest::Approx(1.0 + k).epsilon(1e-12));
    CHECK(curve.bound_m[static_cast<std::size_t>(k - 1)] ==
          doctest::Approx(1.0 / std::sqrt(1.0 + k)).epsilon(1e-12));
  }
}

TEST_CASE("pcrb is monotone decreasing for the zero-noise CV model") {
  const MotionModel motion = build_cv_model(0.5, 0.0, 0.0, 0);
  const MeasurementModel meas = build_position_measurement(4, std::sqrt(5.0));
  const Eigen::MatrixXd prior_cov =
      Eigen::Vector4d(1e4, 1e4, 1e2, 1e2).asDiagonal();
  const PcrbCurve curve = pcrb_curve(motion, meas, prior_cov, 100);
  CHECK(curve.bound_m.front() <= std::sqrt(2e4));  // measurement adds information
  for (std::size_t k = 1; k < curve.bound_m.size(); ++k)
    CHECK(curve.bound_m[k] < curve.bound_m[k - 1]);
  CHECK(curve.bound_m.back() > 0.0);
}

}  // TEST_SUITE
