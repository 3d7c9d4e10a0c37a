#ifndef GSNCOP_MVN_HPP
#define GSNCOP_MVN_HPP

#include <Eigen/Dense>

#include "gsncop/policy.hpp"

namespace gsncop {

/// Probability estimate with an attached standard-error estimate, so callers
/// can separate integration error from series-truncation error.
struct QmcEstimate {
    double value = 0.0;
    double error_estimate = 0.0;  ///< 0 for deterministic evaluations
};

/// P(X <= upper) for X ~ N(mean, cov).  Coordinates of `upper` may be
/// +-infinity (sentinels handled before standardization).  Dimensions 1 and 2
/// use deterministic routines with zero reported error; higher dimensions use
/// randomized quasi-Monte-Carlo over the Cholesky-conditioned integrand with
/// greedy variable reordering, iterating until the estimated standard error
/// drops below policy.mvn_abs_tol (or a fixed sample cap is hit).
/// Throws FactorizationError when cov is not positive definite.
QmcEstimate mvn_cdf(const Eigen::VectorXd& upper, const Eigen::VectorXd& mean,
                    const Eigen::MatrixXd& cov, const SeriesPolicy& policy);

} // namespace gsncop

#endif
