#include "gsncop/dependence.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "gsncop/copula.hpp"
#include "gsncop/errors.hpp"
#include "gsncop/normal.hpp"
#include "gsncop/quadrature.hpp"

namespace gsncop {

namespace {

void require_bivariate(const GsnParams& params, const char* who) {
    if (params.dim() != 2) {
        throw std::invalid_argument(std::string(who) + ": requires dim == 2");
    }
}

// One orthant term of the tau series via the single-integral form
// int_{-inf}^{a1} Phi(c1 - c2 y) phi(y) dy.
double orthant_single_integral(double a1, double c1, double c2, int nodes) {
    const double lo = -9.0;
    const double hi = std::min(a1, 9.0);
    if (hi <= lo) return 0.0;
    auto f = [&](double y) { return norm_cdf(c1 - c2 * y) * norm_pdf(y); };
    double v = gauss_legendre_integrate(f, lo, hi, nodes);
    if (a1 > 9.0) v += norm_cdf(a1) - norm_cdf(9.0);
    return v;
}

} // namespace

double kendalls_tau(const GsnParams& params, const SeriesPolicy& policy,
                    TauRoute route) {
    require_bivariate(params, "kendalls_tau");
    const double p = params.p();
    const double rho = params.sigma()(0, 1);
    const double mu1 = params.mu()(0);
    const double mu2 = params.mu()(1);
    const int K = series_length(p, policy);
    const std::vector<double> w = geometric_weights(p, K);  // p(1-p)^{k-1}

    double s = 0.0;
    for (int n = 1; n <= K; ++n) {
        for (int np = 1; np <= K; ++np) {
            const double rs = 1.0 / std::sqrt(static_cast<double>(n + np));
            const double a1 = (np - n) * mu1 * rs;
            const double a2 = (np - n) * mu2 * rs;
            double term;
            if (route == TauRoute::orthant_series) {
                term = bvn_cdf(a1, a2, rho);
            } else {
                const double c1 = (np - n) * mu2 /
                                  std::sqrt((n + np) * (1.0 - rho * rho));
                const double c2 = rho / std::sqrt(1.0 - rho * rho);
                term = orthant_single_integral(a1, c1, c2, 96);
            }
            s += w[n - 1] * w[np - 1] * term;
        }
    }
    return 4.0 * s - 1.0;
}

double spearmans_rho(const GsnParams& params, const SeriesPolicy& policy) {
    require_bivariate(params, "spearmans_rho");
    const double p = params.p();
    const double rho = params.sigma()(0, 1);
    const double mu1 = params.mu()(0);
    const double mu2 = params.mu()(1);
    // The comparator vector has independent coordinates, each with its own
    // geometric count, so the orthant series runs over three counts.  The
    // inner tolerance absorbs the 12x amplification of the series error.
    SeriesPolicy inner = policy;
    inner.tail_mass_tol = policy.tail_mass_tol / 12.0;
    const int K = series_length(p, inner);
    const std::vector<double> w = geometric_weights(p, K);
    const bool symmetric = (mu1 == mu2);
    const double cutoff = 1e-4 * inner.tail_mass_tol / (K * K);

    double s = 0.0;
    for (int n = 1; n <= K; ++n) {            // count of the dependent pair
        for (int a = 1; a <= K; ++a) {        // comparator count, coordinate 1
            const int b_start = symmetric ? a : 1;
            for (int b = b_start; b <= K; ++b) {  // comparator count, coordinate 2
                double wt = w[n - 1] * w[a - 1] * w[b - 1];
                if (wt < cutoff) break;  // weights only shrink as b grows
                if (symmetric && b > a) wt *= 2.0;
                const double r =
                    n * rho / std::sqrt(static_cast<double>(a + n) * (b + n));
                s += wt * bvn_cdf((n - a) * mu1 / std::sqrt(static_cast<double>(a + n)),
                                  (n - b) * mu2 / std::sqrt(static_cast<double>(b + n)),
                                  r);
            }
        }
    }
    return 12.0 * s - 3.0;
}

double spearmans_rho_shared_count(const GsnParams& params,
                                  const SeriesPolicy& policy) {
    require_bivariate(params, "spearmans_rho_shared_count");
    const double p = params.p();
    const double rho = params.sigma()(0, 1);
    const double mu1 = params.mu()(0);
    const double mu2 = params.mu()(1);
    const int K = series_length(p, policy);
    const std::vector<double> w = geometric_weights(p, K);

    double s = 0.0;
    for (int ns = 1; ns <= K; ++ns) {
        for (int n = 1; n <= K; ++n) {
            const double tot = static_cast<double>(ns + n);
            const double rs = 1.0 / std::sqrt(tot);
            s += w[ns - 1] * w[n - 1] *
                 bvn_cdf((n - ns) * mu1 * rs, (n - ns) * mu2 * rs, n * rho / tot);
        }
    }
    return 12.0 * s - 3.0;
}

double regression_curve(double v, const GsnParams& params,
                        const SeriesPolicy& policy, int n_nodes) {
    require_bivariate(params, "regression_curve");
    if (!(v > 0.0 && v < 1.0)) {
        throw std::invalid_argument("regression_curve: v must lie in (0,1)");
    }
    Gsn1 margin_u(params.mu()(0), 1.0, params.p(), policy);
    Gsn1 margin_v(params.mu()(1), 1.0, params.p(), policy);
    const double xv = margin_v.quantile(v);
    const double logfv = margin_v.logpdf(xv);

    const GaussLegendreRule& rule = gauss_legendre_rule(n_nodes);
    double sum = 0.0;
    double warm = std::numeric_limits<double>::quiet_NaN();
    Eigen::VectorXd xy(2);
    for (int i = 0; i < n_nodes; ++i) {
        const double u = 0.5 * (1.0 + rule.nodes[i]);  // map [-1,1] -> (0,1)
        const double xu = margin_u.quantile(u, warm);
        warm = xu;
        xy << xu, xv;
        const double logc =
            mgsn_logpdf(xy, params, policy) - margin_u.logpdf(xu) - logfv;
        if (!std::isfinite(logc)) {
            throw NumericError("regression_curve: non-finite copula density");
        }
        sum += 0.5 * rule.weights[i] * u * std::exp(logc);
    }
    return sum;
}

double tail_coefficient_estimate(const GsnParams& params, double u,
                                 TailSide side, const SeriesPolicy& policy) {
    require_bivariate(params, "tail_coefficient_estimate");
    if (!(u > 0.0 && u < 0.5)) {
        throw std::invalid_argument("tail_coefficient_estimate: u must lie in (0,0.5)");
    }
    Eigen::VectorXd uu(2);
    uu << u, u;
    if (side == TailSide::lower) {
        return copula_cdf(uu, params, policy) / u;
    }
    // The reflected copula of (p, mu, Sigma) is the copula of (p, -mu, Sigma),
    // so the upper coefficient is the lower coefficient after reflection.
    GsnParams reflected(params.p(), -params.mu(), params.sigma());
    return copula_cdf(uu, reflected, policy) / u;
}

DependenceReport dependence_summary(const GsnParams& params,
                                    const SeriesPolicy& policy) {
    DependenceReport rep;
    rep.tau = kendalls_tau(params, policy);
    rep.rho_s = spearmans_rho(params, policy);
    rep.tau_terms = series_length(params.p(), policy);
    SeriesPolicy inner = policy;
    inner.tail_mass_tol = policy.tail_mass_tol / 12.0;
    rep.rho_terms = series_length(params.p(), inner);
    rep.integration_nodes = 128;
    return rep;
}

} // namespace gsncop
