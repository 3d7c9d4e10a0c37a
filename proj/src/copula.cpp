#include "gsncop/copula.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "gsncop/errors.hpp"
#include "gsncop/normal.hpp"

namespace gsncop {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double clamp_unit(double u, ClampStats* stats) {
    if (u < kCopulaClampLo) {
        if (stats) ++stats->clamped;
        return kCopulaClampLo;
    }
    if (u > 1.0 - kCopulaClampLo) {
        if (stats) ++stats->clamped;
        return 1.0 - kCopulaClampLo;
    }
    return u;
}

std::vector<double> copula_quantiles(const Eigen::VectorXd& u,
                                     const GsnParams& params,
                                     const SeriesPolicy& policy) {
    const int d = params.dim();
    if (u.size() != d) {
        throw std::invalid_argument("copula_quantiles: dimension mismatch");
    }
    std::vector<double> x(static_cast<size_t>(d));
    for (int j = 0; j < d; ++j) {
        const double uj = u(j);
        if (!(uj >= 0.0 && uj <= 1.0)) {
            throw std::invalid_argument("copula_quantiles: u entries must lie in [0,1]");
        }
        if (uj == 0.0) {
            x[j] = -kInf;
        } else if (uj == 1.0) {
            x[j] = kInf;
        } else {
            Gsn1 margin(params.mu()(j), 1.0, params.p(), policy);
            x[j] = margin.quantile(uj);
        }
    }
    return x;
}

double copula_cdf_at(const std::vector<double>& x, const GsnParams& params,
                     const SeriesPolicy& policy) {
    const int d = params.dim();
    if (static_cast<int>(x.size()) != d) {
        throw std::invalid_argument("copula_cdf_at: dimension mismatch");
    }
    std::vector<int> keep;
    for (int j = 0; j < d; ++j) {
        if (x[j] == -kInf) return 0.0;
        if (x[j] < kInf) keep.push_back(j);
    }
    if (keep.empty()) return 1.0;
    Eigen::VectorXd xv(static_cast<int>(keep.size()));
    for (size_t a = 0; a < keep.size(); ++a) xv(static_cast<int>(a)) = x[keep[a]];
    if (static_cast<int>(keep.size()) == d) {
        return mgsn_cdf(xv, params, policy);
    }
    return mgsn_cdf(xv, marginal_params(params, keep), policy);
}

double copula_cdf(const Eigen::VectorXd& u, const GsnParams& params,
                  const SeriesPolicy& policy) {
    return copula_cdf_at(copula_quantiles(u, params, policy), params, policy);
}

double copula_log_density_at(const std::vector<double>& x,
                             const GsnParams& params,
                             const SeriesPolicy& policy) {
    const int d = params.dim();
    if (static_cast<int>(x.size()) != d) {
        throw std::invalid_argument("copula_log_density_at: dimension mismatch");
    }
    Eigen::VectorXd xv(d);
    double denom = 0.0;
    for (int j = 0; j < d; ++j) {
        if (!std::isfinite(x[j])) {
            throw std::invalid_argument(
                "copula_log_density_at: quantiles must be finite (clamp u first)");
        }
        xv(j) = x[j];
        Gsn1 margin(params.mu()(j), 1.0, params.p(), policy);
        denom += margin.logpdf(x[j]);
    }
    const double num = mgsn_logpdf(xv, params, policy);
    const double out = num - denom;
    if (!std::isfinite(out)) {
        throw NumericError("copula_log_density: non-finite value");
    }
    return out;
}

double copula_log_density(const Eigen::VectorXd& u, const GsnParams& params,
                          const SeriesPolicy& policy, ClampStats* stats) {
    const int d = params.dim();
    if (u.size() != d) {
        throw std::invalid_argument("copula_log_density: dimension mismatch");
    }
    Eigen::VectorXd uc(d);
    for (int j = 0; j < d; ++j) {
        if (!(u(j) > 0.0 && u(j) < 1.0)) {
            throw std::invalid_argument("copula_log_density: u entries must lie in (0,1)");
        }
        uc(j) = clamp_unit(u(j), stats);
    }
    return copula_log_density_at(copula_quantiles(uc, params, policy), params,
                                 policy);
}

Eigen::MatrixXd copula_sample(const GsnParams& params, int n,
                              RandomStream& stream,
                              const SeriesPolicy& policy) {
    if (n < 1) {
        throw std::invalid_argument("copula_sample: need n >= 1");
    }
    const int d = params.dim();
    const Eigen::MatrixXd& L = params.sigma().chol_lower();
    std::vector<Gsn1> margins;
    margins.reserve(static_cast<size_t>(d));
    for (int j = 0; j < d; ++j) {
        margins.emplace_back(params.mu()(j), 1.0, params.p(), policy);
    }
    Eigen::MatrixXd out(n, d);
    Eigen::VectorXd z(d);
    for (int i = 0; i < n; ++i) {
        const double count = static_cast<double>(stream.geometric(params.p()));
        for (int j = 0; j < d; ++j) z(j) = stream.normal();
        Eigen::VectorXd x = count * params.mu() + std::sqrt(count) * (L * z);
        for (int j = 0; j < d; ++j) out(i, j) = margins[static_cast<size_t>(j)].cdf(x(j));
    }
    return out;
}

GsnParams sub_copula(const GsnParams& params, const std::vector<int>& keep) {
    return marginal_params(params, keep);
}

} // namespace gsncop
