#include "gsncop/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "gsncop/errors.hpp"
#include "gsncop/normal.hpp"

namespace gsncop {

double digamma(double x) {
    if (!(x > 0.0)) {
        throw std::invalid_argument("digamma: need x > 0");
    }
    double result = 0.0;
    while (x < 6.0) {
        result -= 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    // asymptotic expansion with Bernoulli-number coefficients
    result += std::log(x) - 0.5 * inv -
              inv2 * (1.0 / 12.0 -
                      inv2 * (1.0 / 120.0 -
                              inv2 * (1.0 / 252.0 -
                                      inv2 * (1.0 / 240.0 - inv2 / 132.0))));
    return result;
}

double trigamma(double x) {
    if (!(x > 0.0)) {
        throw std::invalid_argument("trigamma: need x > 0");
    }
    double result = 0.0;
    while (x < 6.0) {
        result += 1.0 / (x * x);
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    result += inv * (1.0 +
                     inv * (0.5 +
                            inv * (1.0 / 6.0 -
                                   inv2 * (1.0 / 30.0 -
                                           inv2 * (1.0 / 42.0 - inv2 / 30.0)))));
    return result;
}

namespace {

// series representation, good for x < a + 1
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < 1000; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// continued fraction (modified Lentz), good for x >= a + 1; returns Q(a,x)
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 1000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

} // namespace

double reg_inc_gamma_p(double a, double x) {
    if (!(a > 0.0) || x < 0.0 || std::isnan(x)) {
        throw std::invalid_argument("reg_inc_gamma_p: need a > 0 and x >= 0");
    }
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_cf(a, x);
}

double inv_reg_inc_gamma_p(double a, double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("inv_reg_inc_gamma_p: need p in (0,1)");
    }
    // Wilson-Hilferty starting value, then safeguarded Newton.
    const double gln = std::lgamma(a);
    const double g = 1.0 - 2.0 / (9.0 * a);
    const double t = norm_quantile(p);
    double x = a * std::pow(g + t * std::sqrt(2.0 / (9.0 * a)), 3.0);
    if (!(x > 0.0)) x = a * std::exp((std::log(p) + gln) / a);
    if (!(x > 0.0) || !std::isfinite(x)) x = a;
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 200; ++it) {
        const double f = reg_inc_gamma_p(a, x) - p;
        if (f > 0.0) {
            hi = x;
        } else {
            lo = x;
        }
        const double logpdf = -x + (a - 1.0) * std::log(x) - gln;
        const double pdf = std::exp(logpdf);
        double step = (pdf > 0.0) ? f / pdf : 0.0;
        double xn = x - step;
        if (!(xn > lo) || !(xn < hi) || pdf <= 0.0) {
            xn = std::isfinite(hi) ? 0.5 * (lo + hi) : (lo > 0 ? 2.0 * lo : 1.0);
        }
        if (std::fabs(xn - x) <= 1e-14 * std::max(1.0, std::fabs(x)) &&
            std::fabs(f) < 1e-12) {
            x = xn;
            break;
        }
        x = xn;
    }
    return x;
}

} // namespace gsncop
