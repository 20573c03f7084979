#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

namespace rfstrack {

/// Opaque association label attached to a mixture component. The tracker
/// packs data-association bookkeeping into it; gaussmix only preserves it
/// and uses it as a deterministic tie-breaker when capping.
using Lineage = std::int64_t;

/// One weighted data-association hypothesis: N(mean, cov) scaled by weight.
struct GaussianComponent {
  double weight = 0.0;
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  Lineage lineage = 0;
};

/// Ordered Gaussian mixture over a common state space.
struct Mixture {
  std::vector<GaussianComponent> components;
  int dim = 0;

  std::size_t size() const { return components.size(); }
  bool empty() const { return components.empty(); }
};

/// log N(x; mean, cov). Throws std::domain_error if cov is not SPD.
double gaussian_logpdf(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                       const Eigen::MatrixXd& cov);

struct ConjugateUpdate {
  GaussianComponent posterior;     // weight copied from the prior
  double marginal_loglik = 0.0;    // log N(z; H m + b, H P H^T + R)
};

/// Conjugate update of a Gaussian prior with likelihood
/// N(z; obs_matrix x + obs_offset, obs_cov). Joseph-form covariance update.
ConjugateUpdate linear_gaussian_update(const GaussianComponent& prior,
                                       const Eigen::MatrixXd& obs_matrix,
                                       const Eigen::VectorXd& obs_offset,
                                       const Eigen::MatrixXd& obs_cov,
                                       const Eigen::VectorXd& z);

/// Drop components with weight < prune_threshold, keep at most cap highest
/// weighted (ties broken by lineage, then input order), renormalize. If
/// everything would be dropped the single highest-weight component survives.
Mixture reduce_mixture(Mixture mix, double prune_threshold, int cap);

/// Zero the weight of every component whose mean is negative at any of the
/// listed coordinates, then renormalize. Degenerate guard as reduce_mixture.
Mixture gate_negative_bias(Mixture mix, const std::vector<int>& bias_indices);

struct Moments {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

/// Moment-matched single Gaussian of a normalized mixture.
Moments mixture_moments(const Mixture& mix);

/// Normalized linear weights from log weights (log-sum-exp, overflow safe).
std::vector<double> normalize_log_weights(std::span<const double> log_weights);

/// Scale weights so they sum to one. Throws if the total is not positive.
void normalize_weights(Mixture& mix);

double logsumexp(std::span<const double> v);

/// Force exact symmetry; call after covariance arithmetic.
inline Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m) {
  return 0.5 * (m + m.transpose());
}

}  // namespace rfstrack
