#ifndef GSNCOP_SIM_DESIGNS_HPP
#define GSNCOP_SIM_DESIGNS_HPP

#include <Eigen/Dense>

#include "gsncop/dataset.hpp"
#include "gsncop/gsn.hpp"
#include "gsncop/longitudinal.hpp"
#include "gsncop/policy.hpp"
#include "gsncop/rng.hpp"

namespace gsncop {

/// Four-dimensional benchmark parameter set used by the simulation studies:
/// p = 0.5, mu = (0,0,1,1), unstructured correlation matrix.
GsnParams standard_design_params();

/// Gamma(log-link) longitudinal design: four visits at times 1..4, covariates
/// x1 ~ Bernoulli(1/2), x2 ~ N(5, 4), t = visit time, linear predictor
/// beta0 + x1 b1 + x2 b2 + t b3, dependence from the reduced copula
/// (p, mu_bar, xi) under the chosen correlation structure.
struct GammaGlmDesign {
    Eigen::VectorXd beta = (Eigen::VectorXd(4) << 1.0, 0.5, 0.5, 1.0).finished();
    double kappa = 3.0;
    double p = 0.5;
    double mu_bar = 1.0;
    double xi = 0.5;
    CorrKind kind = CorrKind::exchangeable;
    int n_times = 4;
};

LongitudinalDataset simulate_gamma_glm(const GammaGlmDesign& design, int m,
                                       RandomStream& stream,
                                       const SeriesPolicy& policy);

/// Ordered-probit longitudinal design: latent z = x1 b1 + x2 b2 + t b3 + e,
/// thresholds (2,4,6) over four categories, same covariates and copula
/// dependence as the gamma design.
struct OrdinalProbitDesign {
    Eigen::VectorXd beta = (Eigen::VectorXd(3) << 0.5, 0.5, 1.0).finished();
    Eigen::VectorXd thresholds = (Eigen::VectorXd(3) << 2.0, 4.0, 6.0).finished();
    int n_categories = 4;
    double p = 0.5;
    double mu_bar = 1.0;
    double xi = 0.5;
    CorrKind kind = CorrKind::exchangeable;
    int n_times = 4;
};

LongitudinalDataset simulate_ordinal_probit(const OrdinalProbitDesign& design,
                                            int m, RandomStream& stream,
                                            const SeriesPolicy& policy);

/// Copula parameters of the reduced longitudinal model at the given times.
GsnParams longitudinal_copula_params(double p, double mu_bar, double xi,
                                     CorrKind kind,
                                     const std::vector<double>& times);

} // namespace gsncop

#endif
