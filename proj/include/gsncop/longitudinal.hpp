#ifndef GSNCOP_LONGITUDINAL_HPP
#define GSNCOP_LONGITUDINAL_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "gsncop/dataset.hpp"
#include "gsncop/glm.hpp"
#include "gsncop/optimize.hpp"
#include "gsncop/policy.hpp"

namespace gsncop {

enum class CorrKind { exchangeable, ar1_exponential };

/// Structured correlation for within-cluster dependence, both kinds driven by
/// a single decay parameter xi > 0: exchangeable uses rho = exp(-xi) for all
/// pairs, the autoregressive kind uses rho_jk = exp(-xi |t_j - t_k|).  The
/// shared copula location mu_bar rides along as part of the dependence model.
struct CorrelationStructure {
    CorrKind kind = CorrKind::exchangeable;
    double xi = 1.0;
    double mu_bar = 0.0;
};

std::string to_string(CorrKind kind);

/// Correlation matrix implied by the structure at the given times.
Eigen::MatrixXd build_correlation(CorrKind kind, double xi,
                                  const std::vector<double>& times);

/// Probability integral transform of the responses through the fitted
/// marginal, clamped into the copula's open-interval range with a count.
struct PitResult {
    std::vector<Eigen::VectorXd> u;  ///< one vector per cluster
    long long clamped = 0;
};

PitResult pit_transform(const LongitudinalDataset& data,
                        const MarginalModel& marginal);

/// Stage-2 objective: sum over clusters of the log copula density at the
/// cluster's pseudo-observations, with the correlation built per cluster from
/// its own times.  Quantiles depend only on (p, mu_bar) and are cached across
/// xi-only updates; clusters of size one contribute zero.
class ClusterCopulaLoglik {
public:
    ClusterCopulaLoglik(const PitResult& pit, const LongitudinalDataset& data,
                        CorrKind kind, SeriesPolicy policy);

    double eval(double p, double xi, double mu_bar);
    Eigen::VectorXd per_cluster(double p, double xi, double mu_bar);

    long long quantile_recomputes() const { return recomputes_; }
    int n_clusters() const { return static_cast<int>(sizes_.size()); }
    bool xi_identified() const { return multi_obs_clusters_ > 0; }
    long long clamped() const { return clamped_; }

private:
    void ensure_quantiles(double p, double mu_bar);

    SeriesPolicy policy_;
    CorrKind kind_;
    std::vector<int> sizes_;
    std::vector<int> offsets_;
    std::vector<std::vector<double>> times_;
    Eigen::VectorXd u_flat_;
    Eigen::VectorXd x_flat_;
    Eigen::VectorXd logf_flat_;
    double cached_p_ = std::numeric_limits<double>::quiet_NaN();
    double cached_mu_ = std::numeric_limits<double>::quiet_NaN();
    long long recomputes_ = 0;
    long long clamped_ = 0;
    int multi_obs_clusters_ = 0;
};

/// Result of the stage-2 (copula) fit under the IFM scheme.
struct CopulaStageFit {
    CorrelationStructure structure;
    double p = 1.0;
    bool gaussian = false;      ///< fitted with p = 1, mu_bar = 0 held fixed
    double loglik = 0.0;        ///< copula part only
    int iterations = 0;
    long long evaluations = 0;
    bool converged = false;
    bool xi_identified = true;
    long long quantile_recomputes = 0;
    long long clamped = 0;

    int n_copula_params() const { return gaussian ? 1 : 3; }
    Eigen::VectorXd packed() const;  ///< (p, xi, mu_bar) or (xi)
    std::vector<std::string> names() const;
};

/// Maximize the stage-2 log-likelihood over (p, xi, mu_bar) by a coarse grid
/// start and box-constrained quasi-Newton.  With gaussian_baseline the fit
/// constrains p = 1, mu_bar = 0 and estimates xi only.
CopulaStageFit fit_copula_stage(const PitResult& pit,
                                const LongitudinalDataset& data, CorrKind kind,
                                const SeriesPolicy& policy,
                                bool gaussian_baseline = false);

/// Per-subject log copula density as a function of marginal parameters theta
/// (the transform is redone under theta) and copula parameters phi.  This is
/// the building block for the stacked sandwich below.
Eigen::VectorXd copula_part_per_subject(const LongitudinalDataset& data,
                                        MarginalFamily family,
                                        const Eigen::VectorXd& theta,
                                        CorrKind kind, bool gaussian,
                                        const Eigen::VectorXd& phi,
                                        const SeriesPolicy& policy);

/// Two-stage sandwich covariance for (theta, phi): block-triangular
/// sensitivity (stage-1 scores do not depend on phi) and the empirical
/// covariance of the stacked per-subject scores.
struct SandwichResult {
    Eigen::MatrixXd covariance;
    Eigen::VectorXd se;
    std::vector<std::string> names;
    bool pseudo_inverse_used = false;
};

SandwichResult godambe_sandwich(const LongitudinalDataset& data,
                                const MarginalModel& marginal,
                                const CopulaStageFit& copula_fit,
                                const SeriesPolicy& policy);

/// Full per-subject log-likelihood (marginal + copula parts) at the fitted
/// two-stage estimates; feeds AIC and the model-comparison test.
Eigen::VectorXd full_per_subject_loglik(const LongitudinalDataset& data,
                                        const MarginalModel& marginal,
                                        const CopulaStageFit& copula_fit,
                                        const SeriesPolicy& policy);

} // namespace gsncop

#endif
