#ifndef GSNCOP_COPULA_FIT_HPP
#define GSNCOP_COPULA_FIT_HPP

#include <Eigen/Dense>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gsncop/gsn.hpp"
#include "gsncop/optimize.hpp"
#include "gsncop/policy.hpp"

namespace gsncop {

/// Packing order for the unrestricted parameters:
/// [p, mu_1..mu_d, rho_12, rho_13, ..., rho_(d-1)d] (upper triangle by rows).
Eigen::VectorXd pack_params(const GsnParams& params);
GsnParams unpack_params(const Eigen::VectorXd& theta, int d);
int n_free_params(int d);
std::vector<std::string> param_names(int d);

/// Outer-iteration record of the two-block coordinate ascent.
struct FitTrace {
    std::vector<double> loglik;                 ///< objective after each outer pass
    std::vector<Eigen::VectorXd> param_path;    ///< packed snapshot per pass
    int outer_iterations = 0;
    bool converged = false;
    long long quantile_recomputes = 0;
    long long clamped = 0;
};

/// Common surface of the packed log-likelihood objectives.
class PackedObjective {
public:
    virtual ~PackedObjective() = default;
    virtual int dim() const = 0;
    /// Returns -inf for invalid or positive-definiteness-violating trials.
    virtual double eval_packed(const Eigen::VectorXd& theta) = 0;
    virtual Eigen::VectorXd per_observation(const Eigen::VectorXd& theta) = 0;
    virtual int n_obs() const = 0;
};

/// Copula log-likelihood of a pseudo-sample with per-column quantile caching.
/// Quantiles depend only on (p, mu_j); correlation updates and per-column
/// gradient perturbations reuse the cached values, which is the structural
/// payoff of the GSN copula in estimation.
class CopulaLoglik : public PackedObjective {
public:
    CopulaLoglik(Eigen::MatrixXd pseudo_sample, SeriesPolicy policy);

    double eval(const GsnParams& params);
    double eval_packed(const Eigen::VectorXd& theta) override;
    Eigen::VectorXd per_observation(const Eigen::VectorXd& theta) override;
    int dim() const override { return static_cast<int>(u_.cols()); }
    int n_obs() const override { return static_cast<int>(u_.rows()); }

    long long quantile_recomputes() const { return recomputes_; }
    long long cache_hits() const { return hits_; }
    long long clamped() const { return clamped_; }

private:
    void ensure_columns(double p, const Eigen::VectorXd& mu);

    Eigen::MatrixXd u_;
    SeriesPolicy policy_;
    struct Column {
        double p = std::numeric_limits<double>::quiet_NaN();
        double mu = std::numeric_limits<double>::quiet_NaN();
        Eigen::VectorXd x;
        Eigen::VectorXd logf;
    };
    std::vector<Column> cols_;
    Eigen::MatrixXd x_;  // assembled quantiles, kept in sync with cols_
    long long recomputes_ = 0;
    long long hits_ = 0;
    long long clamped_ = 0;
};

/// Log-likelihood of raw observations under the distribution itself.
class MgsnLoglik : public PackedObjective {
public:
    MgsnLoglik(Eigen::MatrixXd data, SeriesPolicy policy);
    double eval(const GsnParams& params);
    double eval_packed(const Eigen::VectorXd& theta) override;
    Eigen::VectorXd per_observation(const Eigen::VectorXd& theta) override;
    int dim() const override { return static_cast<int>(x_.cols()); }
    int n_obs() const override { return static_cast<int>(x_.rows()); }

private:
    Eigen::MatrixXd x_;
    SeriesPolicy policy_;
};

/// One-shot copula log-likelihood (quantiles computed once and shared).
double copula_loglik(const Eigen::MatrixXd& pseudo, const GsnParams& params,
                     const SeriesPolicy& policy);

/// Method-of-moments estimates at a fixed p, with the profile likelihood
/// maximized over p by grid search plus golden-section refinement.  When
/// `correlation_scale` is set the moment covariance is rescaled to a
/// correlation matrix (projected to positive definite if needed).
GsnParams mom_profile_init(const Eigen::MatrixXd& data,
                           const SeriesPolicy& policy, bool correlation_scale);

/// Initializer for copula fits: normal scores of the pseudo-sample feed the
/// moment/profile machinery, followed by one refinement pass with GSN-score
/// quantiles at the first-pass parameters.
GsnParams mom_profile_init_pseudo(const Eigen::MatrixXd& pseudo,
                                  const SeriesPolicy& policy);

struct BlockAscentOptions {
    int max_outer = 50;
    double outer_tol = 1e-6;
    BoxOptions inner;
    double p_lo = 1e-4;
    double p_hi = 1.0 - 1e-4;   ///< distribution fits raise this to 1
    double mu_bound = 10.0;
    double rho_bound = 1.0 - 1e-6;
    bool fix_block1 = false;    ///< hold (p, mu) at the initial values
};

struct UnrestrictedFit {
    GsnParams params;
    FitTrace trace;
};

/// Two-block coordinate ascent: maximize over (p, mu) with the correlations
/// fixed, then over the correlations with (p, mu) fixed, until the outer
/// gain drops below outer_tol.  Positive-definiteness violations inside the
/// correlation block are rejected through a -inf penalty, never a crash.
UnrestrictedFit fit_block_ascent(PackedObjective& objective,
                                 const GsnParams& init,
                                 const BlockAscentOptions& opts = {});

/// Convenience drivers with the moment/profile initializer.
UnrestrictedFit fit_mgsn_mle(const Eigen::MatrixXd& data,
                             const SeriesPolicy& policy,
                             BlockAscentOptions opts = {},
                             const std::optional<GsnParams>& init = std::nullopt);
UnrestrictedFit fit_gsn_copula_mle(const Eigen::MatrixXd& pseudo,
                                   const SeriesPolicy& policy,
                                   BlockAscentOptions opts = {},
                                   const std::optional<GsnParams>& init = std::nullopt);

/// Observed information as the sum of outer products of per-observation
/// numerical scores, with standard errors from the inverse diagonal.
struct ObservedInfo {
    Eigen::MatrixXd info;
    Eigen::VectorXd se;
    bool pseudo_inverse_used = false;
};

ObservedInfo observed_info(PackedObjective& objective,
                           const Eigen::VectorXd& theta, double fd_step = 1e-5);

/// Standard errors from a generic information-like matrix (inverse diagonal),
/// falling back to an eigenvalue pseudo-inverse for singular input.
Eigen::VectorXd se_from_information(const Eigen::MatrixXd& info,
                                    bool* pseudo_inverse_used = nullptr);

} // namespace gsncop

#endif
