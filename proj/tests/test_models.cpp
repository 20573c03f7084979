#include "rfstrack/models.hpp"

#include "support/test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace rfstrack;
using namespace rfstrack::testing;

TEST_SUITE("models") {

TEST_CASE("build_cv_model study parameters") {
  // delta 0.5 s, sigma_q^2 = 5, alpha = 10, one bias state
  const MotionModel m = build_cv_model(0.5, std::sqrt(5.0), 10.0, 1);
  CHECK(m.dim() == 5);
  CHECK(m.F(0, 2) == doctest::Approx(0.5));
  CHECK(m.F(1, 3) == doctest::Approx(0.5));
  CHECK(m.F(4, 4) == 1.0);
  CHECK(m.F(4, 0) == 0.0);
  CHECK(m.Q(4, 4) == doctest::Approx(25.0).epsilon(1e-12));  // 5 * 10 * 0.5
  CHECK(m.Q(0, 4) == 0.0);
}

TEST_CASE("build_cv_model without bias states") {
  const MotionModel m = build_cv_model(0.5, 1.0, 10.0, 0);
  CHECK(m.dim() == 4);
  CHECK(m.F == Eigen::MatrixXd(
                   (Eigen::Matrix4d() << 1, 0, 0.5, 0, 0, 1, 0, 0.5, 0, 0, 1, 0, 0,
                    0, 0, 1)
                       .finished()));
}

TEST_CASE("build_cv_model unit substitution") {
  const MotionModel m = build_cv_model(1.0, 1.0, 10.0, 1);
  CHECK(m.Q(0, 0) == doctest::Approx(0.25));
  CHECK(m.Q(0, 2) == doctest::Approx(0.5));
  CHECK(m.Q(2, 0) == doctest::Approx(0.5));
  CHECK(m.Q(2, 2) == doctest::Approx(1.0));
  CHECK(m.Q(1, 1) == doctest::Approx(0.25));
  CHECK(m.Q(1, 3) == doctest::Approx(0.5));
}

TEST_CASE("cv position noise block is sigma_q^2 delta^4/4 I") {
  const double delta = 0.5;
  const double sq = std::sqrt(5.0);
  const MotionModel m = build_cv_model(delta, sq, 10.0, 0);
  const double expect = 5.0 * std::pow(delta, 4) / 4.0;
  CHECK(m.Q(0, 0) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(m.Q(1, 1) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(m.Q(0, 1) == 0.0);
}

TEST_CASE("los_unit_vector") {
  const Eigen::Vector2d o(0.0, 0.0);
  CHECK((los_unit_vector({3, 4}, o) - Eigen::Vector2d(0.6, 0.8)).norm() < 1e-12);
  CHECK((los_unit_vector({10, 0}, o) - Eigen::Vector2d(1.0, 0.0)).norm() < 1e-12);
  const double s = std::sqrt(2.0) / 2.0;
  CHECK((los_unit_vector({500, 500}, o) - Eigen::Vector2d(s, s)).norm() < 1e-12);
  CHECK(los_unit_vector({500, 500}, o).norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(los_unit_vector({1, 1}, {1, 1}), std::domain_error);
}

TEST_CASE("adaptive jammer observation layout") {
  const MeasurementModel meas = build_position_measurement(5, std::sqrt(5.0));

  SUBCASE("single component") {
    const JammerObservation jo =
        build_jammer_obs_adaptive({1.0, 0.0}, 1, 1, meas);
    REQUIRE(jo.obs.rows() == 2);
    REQUIRE(jo.obs.cols() == 5);
    CHECK(jo.obs(0, 0) == 1.0);
    CHECK(jo.obs(1, 1) == 1.0);
    CHECK(jo.obs(0, 4) == 1.0);
    CHECK(jo.obs(1, 4) == 0.0);
    CHECK(jo.obs.block(0, 2, 2, 2).norm() == 0.0);
    CHECK(jo.offset.norm() == 0.0);
  }
  SUBCASE("slot placement with three components") {
    const MeasurementModel meas7 = build_position_measurement(7, std::sqrt(5.0));
    const JammerObservation jo =
        build_jammer_obs_adaptive({0.0, 1.0}, 2, 3, meas7);
    REQUIRE(jo.obs.cols() == 7);
    // LOS column sits at 0-based coordinate 5
    CHECK(jo.obs(0, 5) == 0.0);
    CHECK(jo.obs(1, 5) == 1.0);
    CHECK(jo.obs.col(4).norm() == 0.0);
    CHECK(jo.obs.col(6).norm() == 0.0);
  }
  SUBCASE("noise equals the measurement noise") {
    const JammerObservation jo =
        build_jammer_obs_adaptive({1.0, 0.0}, 1, 1, meas);
    CHECK(jo.noise(0, 0) == doctest::Approx(5.0));
    CHECK(jo.noise(1, 1) == doctest::Approx(5.0));
    CHECK(jo.noise(0, 1) == 0.0);
  }
  SUBCASE("index out of range") {
    CHECK_THROWS_AS(build_jammer_obs_adaptive({1.0, 0.0}, 2, 1, meas),
                    std::invalid_argument);
  }
}

TEST_CASE("non-adaptive jammer observation") {
  SUBCASE("axis-aligned LOS") {
    const JammerObservation jo =
        build_jammer_obs_nonadaptive({1.0, 0.0}, 70.0, {500.0, 1.0});
    CHECK(jo.obs.cols() == 4);
    CHECK(jo.noise(0, 0) == doctest::Approx(500.0));
    CHECK(jo.noise(1, 1) == doctest::Approx(1.0));
    CHECK(jo.noise(0, 1) == doctest::Approx(0.0));
  }
  SUBCASE("offset along the LOS") {
    const JammerObservation jo =
        build_jammer_obs_nonadaptive({0.0, 1.0}, 70.0, {500.0, 1.0});
    CHECK(jo.offset(0) == doctest::Approx(0.0));
    CHECK(jo.offset(1) == doctest::Approx(70.0));
  }
  SUBCASE("eigenvalues invariant under LOS rotation") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    for (int i = 0; i < 20; ++i) {
      const double a = angle(rng);
      const Eigen::Vector2d los(std::cos(a), std::sin(a));
      const JammerObservation jo =
          build_jammer_obs_nonadaptive(los, 70.0, {500.0, 1.0});
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(jo.noise);
      CHECK(es.eigenvalues()(0) == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(es.eigenvalues()(1) == doctest::Approx(500.0).epsilon(1e-9));

      // the eigenbasis is orthonormal by construction
      Eigen::Matrix2d basis;
      basis.col(0) = los;
      basis.col(1) = Eigen::Vector2d(-los.y(), los.x());
      CHECK((basis.transpose() * basis - Eigen::Matrix2d::Identity())
                .cwiseAbs()
                .maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("predicted jammer mean lies on the radar ray") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(50.0, 900.0);
  std::uniform_real_distribution<double> ub(0.0, 120.0);
  const MeasurementModel meas = build_position_measurement(5, std::sqrt(5.0));
  for (int i = 0; i < 20; ++i) {
    Eigen::VectorXd state(5);
    state << u(rng), u(rng), 5.0, -3.0, ub(rng);
    const Eigen::Vector2d pos = state.head<2>();
    const Eigen::Vector2d los = los_unit_vector(pos, {0.0, 0.0});

    const JammerObservation ada = build_jammer_obs_adaptive(los, 1, 1, meas);
    const Eigen::Vector2d mean_a = ada.obs * state + ada.offset;
    const Eigen::Vector2d da = mean_a - pos;
    CHECK(std::abs(da.x() * los.y() - da.y() * los.x()) < 1e-9 * (1.0 + da.norm()));
    CHECK(da.dot(los) >= 0.0);

    const JammerObservation na = build_jammer_obs_nonadaptive(los, 70.0, {500.0, 1.0});
    const Eigen::Vector2d mean_n = na.obs * state.head<4>() + na.offset;
    const Eigen::Vector2d dn = mean_n - pos;
    CHECK(std::abs(dn.x() * los.y() - dn.y() * los.x()) < 1e-9 * (1.0 + dn.norm()));
  }
}

TEST_CASE("clutter mixture weights") {
  ClutterModel cm;
  cm.fov = {0.0, 1000.0, 0.0, 1000.0};

  SUBCASE("study parameters") {
    cm.lambda0_bar = 20.0;
    cm.lambda_jam = {3.0};
    const Eigen::VectorXd w = clutter_mixture_weights(cm);
    REQUIRE(w.size() == 2);
    CHECK(w(0) == 20.0 / 23.0);
    CHECK(w(1) == 3.0 / 23.0);
    CHECK(w(0) == doctest::Approx(0.869565).epsilon(1e-6));
    CHECK(w(1) == doctest::Approx(0.130435).epsilon(1e-6));
  }
  SUBCASE("uniform-only reduces to w0 = 1") {
    cm.lambda0_bar = 20.0;
    cm.lambda_jam = {0.0};
    const Eigen::VectorXd w = clutter_mixture_weights(cm);
    CHECK(w(0) == 1.0);
    CHECK(w(1) == 0.0);
  }
  SUBCASE("two jammer components") {
    cm.lambda0_bar = 20.0;
    cm.lambda_jam = {3.0, 3.0};
    const Eigen::VectorXd w = clutter_mixture_weights(cm);
    CHECK(w(0) == 20.0 / 26.0);
    CHECK(w(1) == 3.0 / 26.0);
    CHECK(w(2) == 3.0 / 26.0);
    CHECK(w.sum() == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("all-zero rates throw") {
    cm.lambda0_bar = 0.0;
    cm.lambda_jam = {0.0};
    CHECK_THROWS_AS(clutter_mixture_weights(cm), std::domain_error);
  }
}

TEST_CASE("fov uniform density") {
  ClutterModel cm;
  cm.fov = {0.0, 1000.0, 0.0, 1000.0};
  CHECK(cm.uniform_density() == doctest::Approx(1e-6));
  CHECK(cm.fov.contains({500, 500}));
  CHECK(!cm.fov.contains({-1, 500}));
}

}  // TEST_SUITE
