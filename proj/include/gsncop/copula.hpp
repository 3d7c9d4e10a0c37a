#ifndef GSNCOP_COPULA_HPP
#define GSNCOP_COPULA_HPP

#include <Eigen/Dense>
#include <vector>

#include "gsncop/gsn.hpp"
#include "gsncop/policy.hpp"
#include "gsncop/rng.hpp"

namespace gsncop {

/// Pseudo-observations are clamped to [kCopulaClampLo, 1 - kCopulaClampLo]
/// before quantile inversion; clamps are counted, never silent.
constexpr double kCopulaClampLo = 1e-12;

struct ClampStats {
    long long clamped = 0;
};

double clamp_unit(double u, ClampStats* stats);

/// Coordinatewise copula quantiles x_j = F1^{-1}(u_j | mu_j, 1, p).
/// Entries at the closed boundary map to -+infinity sentinels.  Quantiles
/// depend only on (p, mu), never on the correlation matrix, which is what
/// makes them cacheable across correlation updates.
std::vector<double> copula_quantiles(const Eigen::VectorXd& u,
                                     const GsnParams& params,
                                     const SeriesPolicy& policy);

/// Copula CDF C(u) = F_d(F1^{-1}(u_1), ..., F1^{-1}(u_d)).  Accepts u in the
/// closed unit cube; boundary coordinates are exact limits.  Throws for
/// entries outside [0,1].
double copula_cdf(const Eigen::VectorXd& u, const GsnParams& params,
                  const SeriesPolicy& policy);

/// Same as copula_cdf but starting from precomputed quantiles.
double copula_cdf_at(const std::vector<double>& x, const GsnParams& params,
                     const SeriesPolicy& policy);

/// log copula density, evaluated as the log multivariate density at the
/// quantiles minus the log marginal densities, each series in log-sum-exp
/// form.  Non-finite intermediates raise NumericError.
double copula_log_density(const Eigen::VectorXd& u, const GsnParams& params,
                          const SeriesPolicy& policy,
                          ClampStats* stats = nullptr);

double copula_log_density_at(const std::vector<double>& x,
                             const GsnParams& params,
                             const SeriesPolicy& policy);

/// n x d matrix of copula draws: latent count, latent normal vector, then
/// the probability integral transform through the unit-scale margins.
Eigen::MatrixXd copula_sample(const GsnParams& params, int n,
                              RandomStream& stream, const SeriesPolicy& policy);

/// Parameters of the copula of the kept coordinates (closure under
/// marginalization).
GsnParams sub_copula(const GsnParams& params, const std::vector<int>& keep);

} // namespace gsncop

#endif
