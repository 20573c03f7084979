#include "rfstrack/gaussmix.hpp"

#include "support/test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace rfstrack;
using namespace rfstrack::testing;

namespace {

// Scalar conjugate-update oracle, written out from first principles.
struct ScalarKalman {
  double mean, var, loglik;
};

ScalarKalman scalar_kalman(double m, double p, double h, double b, double r,
                           double z) {
  const double s = h * p * h + r;
  const double k = p * h / s;
  const double innov = z - (h * m + b);
  ScalarKalman out;
  out.mean = m + k * innov;
  out.var = (1.0 - k * h) * p;
  out.loglik = -0.5 * (std::log(2.0 * M_PI * s) + innov * innov / s);
  return out;
}

}  // namespace

TEST_SUITE("gaussmix") {

TEST_CASE("gaussian_logpdf matches analytic values") {
  CHECK(gaussian_logpdf(vec({0}), vec({0}), mat1(1)) ==
        doctest::Approx(-0.9189385332046727).epsilon(1e-12));
  CHECK(gaussian_logpdf(vec({0, 0}), vec({0, 0}), Eigen::Matrix2d::Identity()) ==
        doctest::Approx(-1.8378770664093453).epsilon(1e-12));
  CHECK(gaussian_logpdf(vec({1}), vec({0}), mat1(1)) ==
        doctest::Approx(-1.4189385332046727).epsilon(1e-12));
}

TEST_CASE("gaussian_logpdf rejects non-SPD covariance") {
  Eigen::MatrixXd bad(2, 2);
  bad << 1.0, 2.0, 2.0, 1.0;  // indefinite
  CHECK_THROWS_AS(gaussian_logpdf(vec({0, 0}), vec({0, 0}), bad), std::domain_error);
}

TEST_CASE("linear_gaussian_update scalar cases") {
  const GaussianComponent prior = scalar_component(1.0, 0.0, 1.0);
  const Eigen::MatrixXd h = mat1(1.0);
  const Eigen::MatrixXd r = mat1(1.0);

  SUBCASE("zero innovation") {
    auto res = linear_gaussian_update(prior, h, vec({0}), r, vec({0}));
    CHECK(res.posterior.mean(0) == doctest::Approx(0.0));
    CHECK(res.posterior.cov(0, 0) == doctest::Approx(0.5));
    CHECK(res.marginal_loglik == doctest::Approx(-1.2655121234846454).epsilon(1e-12));
  }
  SUBCASE("z = 2 against scalar oracle") {
    auto res = linear_gaussian_update(prior, h, vec({0}), r, vec({2}));
    const ScalarKalman expect = scalar_kalman(0.0, 1.0, 1.0, 0.0, 1.0, 2.0);
    CHECK(res.posterior.mean(0) == doctest::Approx(expect.mean).epsilon(1e-12));
    CHECK(res.posterior.cov(0, 0) == doctest::Approx(expect.var).epsilon(1e-12));
    CHECK(res.marginal_loglik == doctest::Approx(expect.loglik).epsilon(1e-12));
    CHECK(res.posterior.mean(0) == doctest::Approx(1.0));
    CHECK(res.marginal_loglik == doctest::Approx(-2.2655121234846454).epsilon(1e-12));
  }
  SUBCASE("offset absorbs the measurement") {
    auto res = linear_gaussian_update(prior, h, vec({5}), r, vec({5}));
    CHECK(res.posterior.mean(0) == doctest::Approx(0.0));
    CHECK(res.posterior.cov(0, 0) == doctest::Approx(0.5));
  }
  SUBCASE("weight passes through untouched") {
    GaussianComponent weighted = prior;
    weighted.weight = 0.37;
    auto res = linear_gaussian_update(weighted, h, vec({0}), r, vec({1}));
    CHECK(res.posterior.weight == 0.37);
  }
}

TEST_CASE("linear_gaussian_update dimension mismatch throws") {
  const GaussianComponent prior = scalar_component(1.0, 0.0, 1.0);
  Eigen::MatrixXd h(1, 2);
  h << 1.0, 0.0;
  CHECK_THROWS_AS(linear_gaussian_update(prior, h, vec({0}), mat1(1), vec({0})),
                  std::invalid_argument);
}

TEST_CASE("two measurement updates commute") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n(0.0, 3.0);
  for (int trial = 0; trial < 25; ++trial) {
    GaussianComponent prior;
    prior.weight = 1.0;
    prior.mean = Eigen::VectorXd::NullaryExpr(3, [&](Eigen::Index) { return n(rng); });
    prior.cov = random_spd(3, rng);

    Eigen::MatrixXd h1(1, 3), h2(2, 3);
    for (int j = 0; j < 3; ++j) {
      h1(0, j) = n(rng);
      h2(0, j) = n(rng);
      h2(1, j) = n(rng);
    }
    const Eigen::MatrixXd r1 = random_spd(1, rng);
    const Eigen::MatrixXd r2 = random_spd(2, rng);
    const Eigen::VectorXd z1 = vec({n(rng)});
    const Eigen::VectorXd z2 = vec({n(rng), n(rng)});

    auto ab = linear_gaussian_update(
        linear_gaussian_update(prior, h1, vec({0}), r1, z1).posterior, h2,
        vec({0, 0}), r2, z2);
    auto ba = linear_gaussian_update(
        linear_gaussian_update(prior, h2, vec({0, 0}), r2, z2).posterior, h1,
        vec({0}), r1, z1);

    const double scale = 1.0 + ab.posterior.mean.norm();
    CHECK((ab.posterior.mean - ba.posterior.mean).norm() / scale < 1e-9);
    CHECK((ab.posterior.cov - ba.posterior.cov).norm() /
              (1.0 + ab.posterior.cov.norm()) <
          1e-9);
  }
}

TEST_CASE("marginal likelihood integrates to one over z") {
  // 1D quadrature of exp(marginal_loglik) over a wide bracket.
  const GaussianComponent prior = scalar_component(1.0, 1.3, 2.0);
  const Eigen::MatrixXd h = mat1(0.7);
  const Eigen::MatrixXd r = mat1(0.5);
  const double center = 0.7 * 1.3;
  const double spread = std::sqrt(0.7 * 0.7 * 2.0 + 0.5);
  const double lo = center - 12.0 * spread;
  const double hi = center + 12.0 * spread;
  const int n = 20001;
  const double dz = (hi - lo) / (n - 1);
  double integral = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = lo + i * dz;
    const double f =
        std::exp(linear_gaussian_update(prior, h, vec({0}), r, vec({z})).marginal_loglik);
    integral += (i == 0 || i == n - 1) ? 0.5 * f : f;
  }
  integral *= dz;
  CHECK(integral == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("reduce_mixture thresholds, caps, renormalizes") {
  Mixture mix;
  mix.dim = 1;
  SUBCASE("prune below threshold") {
    mix.components = {scalar_component(0.6, 0, 1), scalar_component(0.4, 1, 1),
                      scalar_component(5e-6, 2, 1)};
    // renormalize exact inputs
    normalize_weights(mix);
    Mixture out = reduce_mixture(mix, 1e-5, 100);
    REQUIRE(out.size() == 2);
    CHECK(out.components[0].weight == doctest::Approx(0.6).epsilon(1e-5));
    CHECK(out.components[1].weight == doctest::Approx(0.4).epsilon(1e-5));
  }
  SUBCASE("cap keeps the heaviest and renormalizes") {
    mix.components = {scalar_component(0.5, 0, 1), scalar_component(0.3, 1, 1),
                      scalar_component(0.2, 2, 1)};
    Mixture out = reduce_mixture(mix, 1e-5, 2);
    REQUIRE(out.size() == 2);
    CHECK(out.components[0].weight == doctest::Approx(0.625).epsilon(1e-12));
    CHECK(out.components[1].weight == doctest::Approx(0.375).epsilon(1e-12));
  }
  SUBCASE("degenerate guard keeps the argmax") {
    mix.components = {scalar_component(2e-7, 0, 1), scalar_component(8e-7, 1, 1)};
    Mixture out = reduce_mixture(mix, 1e-5, 100);
    REQUIRE(out.size() == 1);
    CHECK(out.components[0].weight == 1.0);
    CHECK(out.components[0].mean(0) == 1.0);
  }
}

TEST_CASE("gate_negative_bias") {
  Mixture mix;
  mix.dim = 2;
  GaussianComponent pos{0.5, vec({1, 10}), Eigen::Matrix2d::Identity(), 1};
  GaussianComponent neg{0.5, vec({1, -2}), Eigen::Matrix2d::Identity(), 2};

  SUBCASE("sign gate zeroes and renormalizes") {
    mix.components = {pos, neg};
    Mixture out = gate_negative_bias(mix, {1});
    REQUIRE(out.size() == 2);
    CHECK(out.components[0].weight == doctest::Approx(1.0));
    CHECK(out.components[1].weight == 0.0);
  }
  SUBCASE("all positive untouched") {
    mix.components = {pos, pos};
    Mixture out = gate_negative_bias(mix, {1});
    CHECK(out.components[0].weight == 0.5);
    CHECK(out.components[1].weight == 0.5);
  }
  SUBCASE("lone negative component becomes the degenerate guard") {
    GaussianComponent lone{1.0, vec({1, -3}), Eigen::Matrix2d::Identity(), 1};
    mix.components = {lone};
    Mixture out = gate_negative_bias(mix, {1});
    REQUIRE(out.size() == 1);
    CHECK(out.components[0].weight == 1.0);
    CHECK(out.components[0].mean(1) == -3.0);
  }
  SUBCASE("no bias coordinates is the identity") {
    mix.components = {pos, neg};
    Mixture out = gate_negative_bias(mix, {});
    CHECK(out.components[0].weight == 0.5);
    CHECK(out.components[1].weight == 0.5);
  }
}

TEST_CASE("mixture_moments") {
  SUBCASE("single component is the identity") {
    Mixture mix;
    mix.dim = 2;
    GaussianComponent g{1.0, vec({3, -1}), 2.0 * Eigen::Matrix2d::Identity(), 0};
    mix.components = {g};
    auto [mean, cov] = mixture_moments(mix);
    CHECK((mean - g.mean).norm() == 0.0);
    CHECK((cov - g.cov).norm() == 0.0);
  }
  SUBCASE("symmetric pair") {
    Mixture mix;
    mix.dim = 1;
    mix.components = {scalar_component(0.5, -1, 1), scalar_component(0.5, 1, 1)};
    auto [mean, cov] = mixture_moments(mix);
    CHECK(mean(0) == doctest::Approx(0.0));
    CHECK(cov(0, 0) == doctest::Approx(2.0));
  }
  SUBCASE("law of total variance") {
    Mixture mix;
    mix.dim = 1;
    mix.components = {scalar_component(0.25, 0, 1), scalar_component(0.75, 4, 1)};
    auto [mean, cov] = mixture_moments(mix);
    // total-variance oracle: E = sum w m; V = sum w (v + m^2) - E^2
    const double e = 0.25 * 0.0 + 0.75 * 4.0;
    const double v = 0.25 * (1.0 + 0.0) + 0.75 * (1.0 + 16.0) - e * e;
    CHECK(mean(0) == doctest::Approx(e).epsilon(1e-12));
    CHECK(cov(0, 0) == doctest::Approx(v).epsilon(1e-12));
    CHECK(mean(0) == doctest::Approx(3.0));
    CHECK(cov(0, 0) == doctest::Approx(4.0));
  }
}

TEST_CASE("reduction and gating keep weights normalized and covariances SPD") {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> nc(1, 12);
  std::uniform_real_distribution<double> thr(0.0, 0.3);
  for (int trial = 0; trial < 40; ++trial) {
    Mixture mix = random_mixture(3, nc(rng), rng);
    Mixture reduced = reduce_mixture(mix, thr(rng), 1 + trial % 5);
    double total = 0.0;
    for (const auto& c : reduced.components) {
      total += c.weight;
      CHECK(is_spd(c.cov));
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    REQUIRE(!reduced.empty());

    Mixture gated = gate_negative_bias(mix, {2});
    total = 0.0;
    for (const auto& c : gated.components) total += c.weight;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

}  // TEST_SUITE
