#ifndef GSNCOP_ORDINAL_HPP
#define GSNCOP_ORDINAL_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "gsncop/dataset.hpp"
#include "gsncop/gsn.hpp"
#include "gsncop/longitudinal.hpp"
#include "gsncop/policy.hpp"

namespace gsncop {

/// Ordered probit margin: latent N(0,1) errors, no intercept (absorbed by the
/// thresholds), strictly increasing thresholds gamma(1..K-1) with
/// gamma(0) = -inf and gamma(K) = +inf.
struct OrdinalModel {
    int n_categories = 2;
    Eigen::VectorXd beta;        ///< regression coefficients, no intercept
    Eigen::VectorXd thresholds;  ///< length K-1, strictly increasing

    int n_params() const {
        return static_cast<int>(beta.size() + thresholds.size());
    }
    double linear_predictor(const Eigen::VectorXd& x) const;
    /// P(Y <= y | x); 1 for y = K, uses the latent normal otherwise.
    double cum_prob(int y, const Eigen::VectorXd& x) const;
    double category_prob(int y, const Eigen::VectorXd& x) const;
};

/// Independence maximum likelihood for the ordered probit margin.  Requires
/// every category 1..K to be observed; the error message carries the
/// category histogram.  Thresholds are optimized through log-increments so
/// monotonicity holds by construction.
OrdinalModel ordinal_marginal_fit(const LongitudinalDataset& data, int K);

/// Natural packing [beta..., gamma...] used by the sandwich estimators.
Eigen::VectorXd pack_ordinal(const OrdinalModel& model);
OrdinalModel unpack_ordinal(int K, int n_cov, const Eigen::VectorXd& packed);

Eigen::VectorXd ordinal_per_subject_loglik(const LongitudinalDataset& data,
                                           int K, const Eigen::VectorXd& packed);

/// C(u_hi,u_hi) - C(u_lo,u_hi) - C(u_hi,u_lo) + C(u_lo,u_lo) for a bivariate
/// pair of the copula; bounds in [0,1] with the closed boundary handled
/// exactly.  Result is clipped into [0,1] (tiny negative noise tolerated).
double pair_rectangle_prob(double u_hi_j, double u_lo_j, double u_hi_k,
                           double u_lo_k, const GsnParams& pair_params,
                           const SeriesPolicy& policy);

struct FloorStats {
    long long floored = 0;  ///< rectangles clipped to the 1e-300 floor
};

/// Pairwise composite log-likelihood evaluator with the marginal held fixed.
/// The per-observation latent bounds u, u^- are precomputed; quantiles of the
/// distinct bound values are cached per (p, mu_bar), so xi-only updates never
/// invert a margin.
class CompositeLoglik {
public:
    CompositeLoglik(const LongitudinalDataset& data, const OrdinalModel& marginal,
                    CorrKind kind, SeriesPolicy policy);

    double eval(double p, double xi, double mu_bar, FloorStats* floors = nullptr);
    Eigen::VectorXd per_subject(double p, double xi, double mu_bar,
                                FloorStats* floors = nullptr);

    long long quantile_recomputes() const { return recomputes_; }
    bool xi_identified() const { return has_pairs_; }
    int n_subjects() const { return static_cast<int>(cluster_sizes_.size()); }

private:
    void ensure_quantiles(double p, double mu_bar);

    SeriesPolicy policy_;
    CorrKind kind_;
    std::vector<int> cluster_sizes_;
    std::vector<int> offsets_;
    std::vector<std::vector<double>> times_;
    // per observation: indices into the distinct-value table, or -1 for the
    // 0/1 boundary (mapped to -inf/+inf quantiles)
    std::vector<int> hi_idx_, lo_idx_;
    std::vector<double> distinct_u_;
    std::vector<double> xq_;
    double cached_p_ = std::numeric_limits<double>::quiet_NaN();
    double cached_mu_ = std::numeric_limits<double>::quiet_NaN();
    long long recomputes_ = 0;
    bool has_pairs_ = false;
};

double composite_loglik(const LongitudinalDataset& data,
                        const OrdinalModel& marginal,
                        const CorrelationStructure& structure, double p,
                        const SeriesPolicy& policy,
                        FloorStats* floors = nullptr);

/// Result of the stage-2 composite-likelihood fit.
struct CmlFit {
    CorrelationStructure structure;
    double p = 1.0;
    bool gaussian = false;
    double comp_loglik = 0.0;
    int iterations = 0;
    long long evaluations = 0;
    bool converged = false;
    bool xi_identified = true;
    long long quantile_recomputes = 0;
    long long floored = 0;  ///< floor count at the reported optimum

    int n_copula_params() const { return gaussian ? 1 : 3; }
    Eigen::VectorXd packed() const;
    std::vector<std::string> names() const;
};

CmlFit fit_cml_stage(const LongitudinalDataset& data, const OrdinalModel& marginal,
                     CorrKind kind, const SeriesPolicy& policy,
                     bool gaussian_baseline = false);

/// Stacked two-stage sandwich for (beta, gamma, copula parameters), with the
/// composite score as the stage-2 estimating function.
SandwichResult cml_sandwich(const LongitudinalDataset& data,
                            const OrdinalModel& marginal, const CmlFit& fit,
                            const SeriesPolicy& policy);

/// Variability and sensitivity matrices of the composite score over the full
/// parameter vector (marginal and copula jointly), as used by the composite
/// information criterion.
struct ClaicParts {
    Eigen::MatrixXd variability;  ///< sum of per-subject score outer products
    Eigen::MatrixXd sensitivity;  ///< negative Hessian of the composite loglik
};

ClaicParts claic_parts(const LongitudinalDataset& data,
                       const OrdinalModel& marginal, const CmlFit& fit,
                       const SeriesPolicy& policy);

/// Per-subject composite log-likelihood at the fitted parameters (feeds the
/// model-comparison test for ordinal fits).
Eigen::VectorXd composite_per_subject_loglik(const LongitudinalDataset& data,
                                             const OrdinalModel& marginal,
                                             const CmlFit& fit,
                                             const SeriesPolicy& policy);

} // namespace gsncop

#endif
