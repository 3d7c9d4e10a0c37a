#ifndef GSNCOP_GSN_HPP
#define GSNCOP_GSN_HPP

#include <Eigen/Dense>
#include <vector>

#include "gsncop/linalg.hpp"
#include "gsncop/policy.hpp"
#include "gsncop/rng.hpp"

namespace gsncop {

/// Parameters of the d-variate geometric skew-normal law: geometric success
/// probability p in (0,1], per-coordinate location mu, and a correlation
/// matrix coupling the normal components.  p = 1 recovers the multivariate
/// normal.  The law is the distribution of a GE(p)-fold sum of independent
/// N(mu, sigma) vectors.
class GsnParams {
public:
    GsnParams(double p, Eigen::VectorXd mu, CorrelationMatrix sigma);

    double p() const { return p_; }
    const Eigen::VectorXd& mu() const { return mu_; }
    const CorrelationMatrix& sigma() const { return sigma_; }
    int dim() const { return static_cast<int>(mu_.size()); }

private:
    double p_;
    Eigen::VectorXd mu_;
    CorrelationMatrix sigma_;
};

/// Number of series terms K with (1-p)^K <= policy.tail_mass_tol, capped at
/// policy.max_terms.  Returns 1 when p = 1.
int series_length(double p, const SeriesPolicy& policy);

/// Geometric weights p(1-p)^{k-1}, k = 1..K.
std::vector<double> geometric_weights(double p, int K);

/// Univariate geometric skew-normal evaluator with frozen parameters.
/// Groups the CDF/PDF series and the quantile solver so that repeated calls
/// share the precomputed weights.
class Gsn1 {
public:
    Gsn1(double mu, double sigma, double p, const SeriesPolicy& policy);

    double cdf(double x) const;
    double pdf(double x) const;
    double logpdf(double x) const;

    /// CDF inversion by Newton's method with the analytic density and a
    /// bracketing/bisection safeguard.  `x0` warm-starts the iteration
    /// (pass NaN for the moment-based default start).
    double quantile(double u) const;
    double quantile(double u, double x0) const;

    double mean() const;
    double sd() const;

private:
    double mu_, sigma_, p_;
    double quantile_tol_;
    int terms_;
    std::vector<double> w_;
    std::vector<double> logw_;
    std::vector<double> rsqrtk_;
};

double gsn1_cdf(double x, double mu, double sigma, double p,
                const SeriesPolicy& policy);
double gsn1_pdf(double x, double mu, double sigma, double p,
                const SeriesPolicy& policy);
double gsn1_quantile(double u, double mu, double sigma, double p,
                     const SeriesPolicy& policy);

/// log density of the d-variate law at x.
double mgsn_logpdf(const Eigen::VectorXd& x, const GsnParams& params,
                   const SeriesPolicy& policy);

double mgsn_pdf(const Eigen::VectorXd& x, const GsnParams& params,
                const SeriesPolicy& policy);

/// Row-wise log density for a batch of points (rows of x).
Eigen::VectorXd mgsn_logpdf_batch(const Eigen::MatrixXd& x,
                                  const GsnParams& params,
                                  const SeriesPolicy& policy);

/// Batch log density for a general SPD covariance.  Only moment-based
/// initializers need this; the copula path always works with correlation
/// matrices.  Throws FactorizationError for non-PD cov.
Eigen::VectorXd mgsn_logpdf_batch_cov(const Eigen::MatrixXd& x, double p,
                                      const Eigen::VectorXd& mu,
                                      const Eigen::MatrixXd& cov,
                                      const SeriesPolicy& policy);

/// CDF of the d-variate law.  Truncation plus integration error is bounded
/// by tail_mass_tol + K * mvn_abs_tol (the QMC part only enters for d >= 3).
double mgsn_cdf(const Eigen::VectorXd& x, const GsnParams& params,
                const SeriesPolicy& policy);

/// n x d matrix of draws: N ~ GE(p), then one N_d(N mu, N sigma) vector.
Eigen::MatrixXd mgsn_sample(const GsnParams& params, int n, RandomStream& stream);

/// Pearson correlation of coordinates i and j implied by the parameters.
double mgsn_corr(const GsnParams& params, int i, int j);

/// Parameters of the marginal law of the kept coordinates (same p, sub-mu,
/// principal submatrix of sigma).
GsnParams marginal_params(const GsnParams& params, const std::vector<int>& keep);

/// P(xlo1 < X1 <= xhi1, xlo2 < X2 <= xhi2) for a bivariate pair with unit
/// scales; bounds may be +-infinity.  Fully deterministic (series of
/// bivariate-normal rectangles).
double gsn2_rectangle(double xlo1, double xhi1, double xlo2, double xhi2,
                      double mu1, double mu2, double rho, double p,
                      const SeriesPolicy& policy);

} // namespace gsncop

#endif
