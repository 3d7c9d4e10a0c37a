#ifndef GSNCOP_POLICY_HPP
#define GSNCOP_POLICY_HPP

#include <cstdint>

namespace gsncop {

/// Truncation and tolerance policy shared by every infinite-series and
/// integration routine.  The geometric series over the latent count is cut
/// at K terms chosen so that the discarded mass (1-p)^K does not exceed
/// tail_mass_tol (capped at max_terms).
struct SeriesPolicy {
    double tail_mass_tol = 1e-12;  ///< allowed discarded geometric tail mass
    int max_terms = 10000;         ///< hard cap on series length
    double mvn_abs_tol = 1e-6;     ///< target standard error for QMC normal CDF
    double quantile_tol = 1e-10;   ///< |cdf(quantile(u)) - u| stopping rule

    bool valid() const {
        return tail_mass_tol > 0 && max_terms > 0 && mvn_abs_tol > 0 &&
               quantile_tol > 0;
    }
};

} // namespace gsncop

#endif
