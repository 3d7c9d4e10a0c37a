#include "gsncop/normal.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <algorithm>

namespace gsncop {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779399461;
constexpr double kLogSqrt2Pi = 0.9189385332046727417803297;
constexpr double kTwoPi = 6.283185307179586476925287;

// Gauss-Legendre half-rules (negative nodes) used by the bivariate CDF:
// 6, 12 and 20 point rules selected by |rho|.
const double kGLx6[3] = {-0.9324695142031522, -0.6612093864662647,
                         -0.2386191860831970};
const double kGLw6[3] = {0.1713244923791705, 0.3607615730481384,
                         0.4679139345726904};
const double kGLx12[6] = {-0.9815606342467191, -0.9041172563704750,
                          -0.7699026741943050, -0.5873179542866171,
                          -0.3678314989981802, -0.1252334085114692};
const double kGLw12[6] = {0.04717533638651177, 0.1069393259953183,
                          0.1600783285433464,  0.2031674267230659,
                          0.2334925365383547,  0.2491470458134029};
const double kGLx20[10] = {-0.9931285991850949, -0.9639719272779138,
                           -0.9122344282513259, -0.8391169718222188,
                           -0.7463319064601508, -0.6360536807265150,
                           -0.5108670019508271, -0.3737060887154195,
                           -0.2277858511416451, -0.07652652113349733};
const double kGLw20[10] = {0.01761400713915212, 0.04060142980038694,
                           0.06267204833410906, 0.08327674157670475,
                           0.1019301198172404,  0.1181945319615184,
                           0.1316886384491766,  0.1420961093183820,
                           0.1491729864726037,  0.1527533871307258};

// P(X > h, Y > k) for standard bivariate normal with correlation r,
// Genz's refinement of the Drezner-Wesolowsky scheme.
double bvnd(double h, double k, double r) {
    const double* gx;
    const double* gw;
    int lg;
    const double ar = std::fabs(r);
    if (ar < 0.3) {
        gx = kGLx6;
        gw = kGLw6;
        lg = 3;
    } else if (ar < 0.75) {
        gx = kGLx12;
        gw = kGLw12;
        lg = 6;
    } else {
        gx = kGLx20;
        gw = kGLw20;
        lg = 10;
    }

    double hk = h * k;
    double bvn = 0.0;
    if (ar < 0.925) {
        if (ar > 0.0) {
            const double hs = (h * h + k * k) / 2.0;
            const double asr = std::asin(r);
            for (int i = 0; i < lg; ++i) {
                for (int is = -1; is <= 1; is += 2) {
                    const double sn = std::sin(asr * (is * gx[i] + 1.0) / 2.0);
                    bvn += gw[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
                }
            }
            bvn = bvn * asr / (2.0 * kTwoPi);
        }
        bvn += norm_cdf(-h) * norm_cdf(-k);
    } else {
        if (r < 0.0) {
            k = -k;
            hk = -hk;
        }
        if (ar < 1.0) {
            const double as = (1.0 - r) * (1.0 + r);
            double a = std::sqrt(as);
            const double bs = (h - k) * (h - k);
            const double c = (4.0 - hk) / 8.0;
            const double d = (12.0 - hk) / 16.0;
            double asr = -(bs / as + hk) / 2.0;
            if (asr > -100.0) {
                bvn = a * std::exp(asr) *
                      (1.0 - c * (bs - as) * (1.0 - d * bs / 5.0) / 3.0 +
                       c * d * as * as / 5.0);
            }
            if (-hk < 100.0) {
                const double b = std::sqrt(bs);
                bvn -= std::exp(-hk / 2.0) * std::sqrt(kTwoPi) *
                       norm_cdf(-b / a) * b *
                       (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0);
            }
            a /= 2.0;
            for (int i = 0; i < lg; ++i) {
                for (int is = -1; is <= 1; is += 2) {
                    const double t = a * (is * gx[i] + 1.0);
                    const double xs = t * t;
                    const double rs = std::sqrt(1.0 - xs);
                    asr = -(bs / xs + hk) / 2.0;
                    if (asr > -100.0) {
                        bvn += a * gw[i] * std::exp(asr) *
                               (std::exp(-hk * (1.0 - rs) / (2.0 * (1.0 + rs))) / rs -
                                (1.0 + c * xs * (1.0 + d * xs)));
                    }
                }
            }
            bvn = -bvn / kTwoPi;
        }
        if (r > 0.0) {
            bvn += norm_cdf(-std::max(h, k));
        } else {
            bvn = -bvn;
            if (k > h) bvn += norm_cdf(k) - norm_cdf(h);
        }
    }
    return bvn;
}

} // namespace

double norm_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double norm_logpdf(double x) { return -0.5 * x * x - kLogSqrt2Pi; }

double norm_cdf(double x) {
    if (std::isnan(x)) return x;
    return 0.5 * std::erfc(-x * M_SQRT1_2);
}

double norm_quantile(double u) {
    // Wichura, AS 241 (PPND16).
    if (std::isnan(u)) return u;
    if (u <= 0.0) return -std::numeric_limits<double>::infinity();
    if (u >= 1.0) return std::numeric_limits<double>::infinity();

    static const double a[8] = {
        3.3871328727963666080,    1.3314166789178437745e+2,
        1.9715909503065514427e+3, 1.3731693765509461125e+4,
        4.5921953931549871457e+4, 6.7265770927008700853e+4,
        3.3430575583588128105e+4, 2.5090809287301226727e+3};
    static const double b[8] = {
        1.0,                      4.2313330701600911252e+1,
        6.8718700749205790830e+2, 5.3941960214247511077e+3,
        2.1213794301586595867e+4, 3.9307895800092710610e+4,
        2.8729085735721942674e+4, 5.2264952788528545610e+3};
    static const double c[8] = {
        1.42343711074968357734,    4.63033784615654529590,
        5.76949722146069140550,    3.64784832476320460504,
        1.27045825245236838258,    2.41780725177450611770e-1,
        2.27238449892691845833e-2, 7.74545014278341407640e-4};
    static const double d[8] = {
        1.0,                       2.05319162663775882187,
        1.67638483018380384940,    6.89767334985100004550e-1,
        1.48103976427480074590e-1, 1.51986665636164571966e-2,
        5.47593808499534494600e-4, 1.05075007164441684324e-9};
    static const double e[8] = {
        6.65790464350110377720,    5.46378491116411436990,
        1.78482653991729133580,    2.96560571828504891230e-1,
        2.65321895265761230930e-2, 1.24266094738807843860e-3,
        2.71155556874348757815e-5, 2.01033439929228813265e-7};
    static const double f[8] = {
        1.0,                       5.99832206555887937690e-1,
        1.36929880922735805310e-1, 1.48753612908506148525e-2,
        7.86869131145613259100e-4, 1.84631831751005468180e-5,
        1.42151175831644588870e-7, 2.04426310338993978564e-15};

    auto poly = [](const double* p, double x) {
        double v = p[7];
        for (int i = 6; i >= 0; --i) v = v * x + p[i];
        return v;
    };

    const double q = u - 0.5;
    if (std::fabs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q * poly(a, r) / poly(b, r);
    }
    double r = (q < 0.0) ? u : 1.0 - u;
    r = std::sqrt(-std::log(r));
    double value;
    if (r <= 5.0) {
        r -= 1.6;
        value = poly(c, r) / poly(d, r);
    } else {
        r -= 5.0;
        value = poly(e, r) / poly(f, r);
    }
    return (q < 0.0) ? -value : value;
}

double bvn_cdf(double x, double y, double rho) {
    if (std::isnan(x) || std::isnan(y) || std::isnan(rho)) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    if (!(std::fabs(rho) < 1.0)) {
        throw std::invalid_argument("bvn_cdf: correlation must lie in (-1,1)");
    }
    const double inf = std::numeric_limits<double>::infinity();
    if (x == -inf || y == -inf) return 0.0;
    if (x == inf && y == inf) return 1.0;
    if (x == inf) return norm_cdf(y);
    if (y == inf) return norm_cdf(x);
    if (rho == 0.0) return norm_cdf(x) * norm_cdf(y);
    const double p = bvnd(-x, -y, rho);
    return std::min(1.0, std::max(0.0, p));
}

double bvn_rectangle(double xlo, double xhi, double ylo, double yhi,
                     double rho) {
    if (xhi < xlo || yhi < ylo) {
        throw std::invalid_argument("bvn_rectangle: inverted bounds");
    }
    const double p = bvn_cdf(xhi, yhi, rho) - bvn_cdf(xlo, yhi, rho) -
                     bvn_cdf(xhi, ylo, rho) + bvn_cdf(xlo, ylo, rho);
    return std::min(1.0, std::max(0.0, p));
}

} // namespace gsncop
