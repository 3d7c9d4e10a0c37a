#ifndef GSNCOP_DEPENDENCE_HPP
#define GSNCOP_DEPENDENCE_HPP

#include "gsncop/gsn.hpp"
#include "gsncop/policy.hpp"

namespace gsncop {

/// Summary of the bivariate dependence measures and of the numerical effort
/// spent computing them.
struct DependenceReport {
    double tau = 0.0;
    double rho_s = 0.0;
    int tau_terms = 0;    ///< per-index truncation length of the tau series
    int rho_terms = 0;    ///< per-index truncation length of the rho series
    int integration_nodes = 0;
};

/// Evaluation route for Kendall's tau: the double series of bivariate normal
/// orthant probabilities, or the equivalent single-integral form evaluated by
/// Gauss-Legendre quadrature.  Both agree to well below 1e-6.
enum class TauRoute { orthant_series, single_integral };

/// Kendall's tau of the bivariate copula.  Requires dim == 2.
double kendalls_tau(const GsnParams& params, const SeriesPolicy& policy,
                    TauRoute route = TauRoute::orthant_series);

/// Spearman's rho of the bivariate copula: the orthant-probability series
/// with an independent geometric count per comparator coordinate, which is
/// the exact rank correlation (verified against Monte-Carlo ranks).
/// Requires dim == 2.
double spearmans_rho(const GsnParams& params, const SeriesPolicy& policy);

/// Reference variant of the rho series in which the comparator pair shares a
/// single geometric count.  For p < 1 with nonzero locations this is NOT the
/// rank correlation (it can even leave [-1,1]); it is kept only so the
/// difference between the two constructions stays measurable.
double spearmans_rho_shared_count(const GsnParams& params,
                                  const SeriesPolicy& policy);

/// Conditional mean E(U | V = v) of the bivariate copula, evaluated by
/// Gauss-Legendre integration of u * c(u,v) over (0,1).
double regression_curve(double v, const GsnParams& params,
                        const SeriesPolicy& policy, int n_nodes = 128);

enum class TailSide { lower, upper };

/// Finite-level tail dependence diagnostic: C(u,u)/u on the lower side, and
/// the same quantity for the reflected copula (parameters (p, -mu, sigma))
/// on the upper side.  Requires u in (0, 0.5).
double tail_coefficient_estimate(const GsnParams& params, double u,
                                 TailSide side, const SeriesPolicy& policy);

DependenceReport dependence_summary(const GsnParams& params,
                                    const SeriesPolicy& policy);

} // namespace gsncop

#endif
