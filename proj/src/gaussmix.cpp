#include "rfstrack/gaussmix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace rfstrack {

namespace {
constexpr double kLogTwoPi = 1.8378770664093453;
}  // namespace

double logsumexp(std::span<const double> v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

std::vector<double> normalize_log_weights(std::span<const double> log_weights) {
  const double lse = logsumexp(log_weights);
  if (!std::isfinite(lse))
    throw std::domain_error("normalize_log_weights: total weight is zero");
  std::vector<double> w(log_weights.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::exp(log_weights[i] - lse);
  return w;
}

void normalize_weights(Mixture& mix) {
  double total = 0.0;
  for (const auto& c : mix.components) total += c.weight;
  if (!(total > 0.0))
    throw std::domain_error("normalize_weights: total weight is zero");
  for (auto& c : mix.components) c.weight /= total;
}

double gaussian_logpdf(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                       const Eigen::MatrixXd& cov) {
  if (x.size() != mean.size() || cov.rows() != cov.cols() || cov.rows() != x.size())
    throw std::invalid_argument("gaussian_logpdf: dimension mismatch");
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success)
    throw std::domain_error("gaussian_logpdf: covariance not positive definite");
  const Eigen::MatrixXd& L = llt.matrixLLT();
  double logdet = 0.0;
  for (Eigen::Index i = 0; i < L.rows(); ++i) logdet += std::log(L(i, i));
  logdet *= 2.0;
  const Eigen::VectorXd half = llt.matrixL().solve(x - mean);
  return -0.5 * (static_cast<double>(x.size()) * kLogTwoPi + logdet + half.squaredNorm());
}

ConjugateUpdate linear_gaussian_update(const GaussianComponent& prior,
                                       const Eigen::MatrixXd& obs_matrix,
                                       const Eigen::VectorXd& obs_offset,
                                       const Eigen::MatrixXd& obs_cov,
                                       const Eigen::VectorXd& z) {
  const Eigen::Index dx = prior.mean.size();
  const Eigen::Index dz = z.size();
  if (obs_matrix.rows() != dz || obs_matrix.cols() != dx ||
      obs_offset.size() != dz || obs_cov.rows() != dz || obs_cov.cols() != dz)
    throw std::invalid_argument("linear_gaussian_update: dimension mismatch");

  const Eigen::VectorXd predicted_z = obs_matrix * prior.mean + obs_offset;
  const Eigen::MatrixXd S =
      symmetrize(obs_matrix * prior.cov * obs_matrix.transpose() + obs_cov);

  Eigen::LLT<Eigen::MatrixXd> llt(S);
  if (llt.info() != Eigen::Success)
    throw std::domain_error("linear_gaussian_update: innovation covariance not SPD");

  const Eigen::VectorXd innovation = z - predicted_z;
  // K = P H^T S^{-1}
  const Eigen::MatrixXd K = llt.solve(obs_matrix * prior.cov).transpose();

  ConjugateUpdate out;
  out.posterior.weight = prior.weight;
  out.posterior.lineage = prior.lineage;
  out.posterior.mean = prior.mean + K * innovation;
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(dx, dx);
  const Eigen::MatrixXd A = I - K * obs_matrix;
  out.posterior.cov =
      symmetrize(A * prior.cov * A.transpose() + K * obs_cov * K.transpose());

  const Eigen::MatrixXd& L = llt.matrixLLT();
  double logdet = 0.0;
  for (Eigen::Index i = 0; i < L.rows(); ++i) logdet += std::log(L(i, i));
  logdet *= 2.0;
  const Eigen::VectorXd half = llt.matrixL().solve(innovation);
  out.marginal_loglik =
      -0.5 * (static_cast<double>(dz) * kLogTwoPi + logdet + half.squaredNorm());
  return out;
}

namespace {

// Shared degenerate guard: collapse to the single best component, weight 1.
Mixture argmax_only(Mixture mix) {
  auto best = std::max_element(
      mix.components.begin(), mix.components.end(),
      [](const GaussianComponent& a, const GaussianComponent& b) {
        if (a.weight != b.weight) return a.weight < b.weight;
        return a.lineage > b.lineage;
      });
  GaussianComponent keep = *best;
  keep.weight = 1.0;
  mix.components.assign(1, std::move(keep));
  return mix;
}

}  // namespace

Mixture reduce_mixture(Mixture mix, double prune_threshold, int cap) {
  if (mix.empty()) throw std::invalid_argument("reduce_mixture: empty mixture");
  if (cap < 1) throw std::invalid_argument("reduce_mixture: cap must be >= 1");

  const bool any_survives =
      std::any_of(mix.components.begin(), mix.components.end(),
                  [&](const GaussianComponent& c) { return c.weight >= prune_threshold && c.weight > 0.0; });
  if (!any_survives) return argmax_only(std::move(mix));

  std::erase_if(mix.components, [&](const GaussianComponent& c) {
    return c.weight < prune_threshold || c.weight == 0.0;
  });

  if (static_cast<int>(mix.components.size()) > cap) {
    std::vector<std::size_t> idx(mix.components.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      const auto& ca = mix.components[a];
      const auto& cb = mix.components[b];
      if (ca.weight != cb.weight) return ca.weight > cb.weight;
      return ca.lineage < cb.lineage;
    });
    idx.resize(static_cast<std::size_t>(cap));
    std::sort(idx.begin(), idx.end());  // preserve input order among survivors
    std::vector<GaussianComponent> kept;
    kept.reserve(idx.size());
    for (std::size_t i : idx) kept.push_back(std::move(mix.components[i]));
    mix.components = std::move(kept);
  }

  normalize_weights(mix);
  return mix;
}

Mixture gate_negative_bias(Mixture mix, const std::vector<int>& bias_indices) {
  if (mix.empty()) throw std::invalid_argument("gate_negative_bias: empty mixture");
  if (bias_indices.empty()) return mix;

  double total = 0.0;
  for (auto& c : mix.components) {
    for (int idx : bias_indices) {
      if (idx < 0 || idx >= c.mean.size())
        throw std::invalid_argument("gate_negative_bias: bias index out of range");
      if (c.mean(idx) < 0.0) {
        c.weight = 0.0;
        break;
      }
    }
    total += c.weight;
  }
  if (total == 0.0) return argmax_only(std::move(mix));
  for (auto& c : mix.components) c.weight /= total;
  return mix;
}

Moments mixture_moments(const Mixture& mix) {
  if (mix.empty()) throw std::invalid_argument("mixture_moments: empty mixture");
  const Eigen::Index d = mix.components.front().mean.size();
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
  for (const auto& c : mix.components) mean += c.weight * c.mean;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
  for (const auto& c : mix.components) {
    const Eigen::VectorXd dm = c.mean - mean;
    cov += c.weight * (c.cov + dm * dm.transpose());
  }
  return {std::move(mean), symmetrize(cov)};
}

}  // namespace rfstrack
