#include "gsncop/gsn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gsncop/errors.hpp"
#include "gsncop/mvn.hpp"
#include "gsncop/normal.hpp"

namespace gsncop {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLog2Pi = 1.8378770664093454835606594;

} // namespace

GsnParams::GsnParams(double p, Eigen::VectorXd mu, CorrelationMatrix sigma)
    : p_(p), mu_(std::move(mu)), sigma_(std::move(sigma)) {
    if (!(p_ > 0.0 && p_ <= 1.0)) {
        throw std::invalid_argument("GsnParams: p must lie in (0,1]");
    }
    if (mu_.size() != sigma_.dim()) {
        throw std::invalid_argument("GsnParams: mu and sigma dimensions differ");
    }
    if (!mu_.allFinite()) {
        throw std::invalid_argument("GsnParams: mu must be finite");
    }
}

int series_length(double p, const SeriesPolicy& policy) {
    if (!(p > 0.0 && p <= 1.0)) {
        throw std::invalid_argument("series_length: p must lie in (0,1]");
    }
    if (!policy.valid()) {
        throw std::invalid_argument("series_length: invalid policy");
    }
    if (p == 1.0) return 1;
    const double q = 1.0 - p;
    double raw = std::log(policy.tail_mass_tol) / std::log(q);
    int k = static_cast<int>(std::ceil(raw));
    if (k < 1) k = 1;
    // guard against rounding in the logs: enforce (1-p)^K <= tol exactly
    while (k > 1 && std::pow(q, k - 1) <= policy.tail_mass_tol) --k;
    while (std::pow(q, k) > policy.tail_mass_tol && k < policy.max_terms) ++k;
    return std::min(k, policy.max_terms);
}

std::vector<double> geometric_weights(double p, int K) {
    std::vector<double> w(static_cast<size_t>(K));
    double cur = p;
    for (int k = 0; k < K; ++k) {
        w[static_cast<size_t>(k)] = cur;
        cur *= (1.0 - p);
    }
    return w;
}

// ---------------------------------------------------------------------------
// univariate evaluator

Gsn1::Gsn1(double mu, double sigma, double p, const SeriesPolicy& policy)
    : mu_(mu), sigma_(sigma), p_(p), quantile_tol_(policy.quantile_tol) {
    if (!(sigma > 0.0)) {
        throw std::invalid_argument("Gsn1: sigma must be positive");
    }
    if (!(p > 0.0 && p <= 1.0)) {
        throw std::invalid_argument("Gsn1: p must lie in (0,1]");
    }
    terms_ = series_length(p, policy);
    w_ = geometric_weights(p, terms_);
    logw_.resize(w_.size());
    rsqrtk_.resize(w_.size());
    const double logp = std::log(p);
    const double log1mp = (p < 1.0) ? std::log1p(-p) : 0.0;
    for (int k = 1; k <= terms_; ++k) {
        logw_[k - 1] = logp + (k - 1) * log1mp;
        rsqrtk_[k - 1] = 1.0 / std::sqrt(static_cast<double>(k));
    }
}

double Gsn1::cdf(double x) const {
    if (x == kInf) return 1.0;
    if (x == -kInf) return 0.0;
    double s = 0.0;
    for (int k = 1; k <= terms_; ++k) {
        const double z = (x - k * mu_) / sigma_ * rsqrtk_[k - 1];
        s += w_[k - 1] * norm_cdf(z);
    }
    return std::min(1.0, s);
}

double Gsn1::logpdf(double x) const {
    const double log_sigma = std::log(sigma_);
    auto term = [&](int k) {
        const double z = (x - k * mu_) / sigma_ * rsqrtk_[k - 1];
        return logw_[k - 1] - 0.5 * z * z + std::log(rsqrtk_[k - 1]) -
               0.5 * kLog2Pi - log_sigma;
    };
    double m = -kInf;
    for (int k = 1; k <= terms_; ++k) m = std::max(m, term(k));
    if (m == -kInf) return -kInf;
    double acc = 0.0;
    for (int k = 1; k <= terms_; ++k) acc += std::exp(term(k) - m);
    return m + std::log(acc);
}

double Gsn1::pdf(double x) const {
    double s = 0.0;
    for (int k = 1; k <= terms_; ++k) {
        const double z = (x - k * mu_) / sigma_ * rsqrtk_[k - 1];
        s += w_[k - 1] * norm_pdf(z) * rsqrtk_[k - 1] / sigma_;
    }
    return s;
}

double Gsn1::mean() const { return mu_ / p_; }

double Gsn1::sd() const {
    return std::sqrt(sigma_ * sigma_ / p_ + mu_ * mu_ * (1.0 - p_) / (p_ * p_));
}

double Gsn1::quantile(double u) const {
    return quantile(u, std::numeric_limits<double>::quiet_NaN());
}

double Gsn1::quantile(double u, double x0) const {
    if (!(u > 0.0 && u < 1.0)) {
        throw std::invalid_argument("Gsn1::quantile: u must lie in (0,1)");
    }
    if (p_ == 1.0) return mu_ + sigma_ * norm_quantile(u);

    double x = x0;
    if (!std::isfinite(x)) x = mean() + sd() * norm_quantile(u);
    double lo = -kInf, hi = kInf;
    double expand = std::max(sigma_, sd());
    // cap the Newton step so density underflow in a far tail falls through
    // to the bracket/expansion safeguard instead of jumping out of range
    const double step_cap = 100.0 * (std::fabs(mu_) + sigma_ + sd() + 1.0);
    for (int it = 0; it < 300; ++it) {
        const double err = cdf(x) - u;
        if (std::fabs(err) <= quantile_tol_) return x;
        if (err > 0.0) {
            hi = x;
        } else {
            lo = x;
        }
        const double f = pdf(x);
        double xn = (f > 1e-300) ? x - err / f : kInf;
        if (std::fabs(xn - x) > step_cap) xn = kInf;
        if (!(xn > lo && xn < hi)) {
            if (std::isfinite(lo) && std::isfinite(hi)) {
                xn = 0.5 * (lo + hi);
            } else if (err > 0.0) {  // need to move left into the open bracket
                xn = x - expand;
                expand *= 2.0;
            } else {
                xn = x + expand;
                expand *= 2.0;
            }
        }
        if (std::isfinite(lo) && std::isfinite(hi) &&
            hi - lo < 1e-15 * std::max(1.0, std::fabs(lo))) {
            return 0.5 * (lo + hi);
        }
        x = xn;
    }
    throw NumericError("Gsn1::quantile: no convergence; check policy tolerances");
}

double gsn1_cdf(double x, double mu, double sigma, double p,
                const SeriesPolicy& policy) {
    return Gsn1(mu, sigma, p, policy).cdf(x);
}

double gsn1_pdf(double x, double mu, double sigma, double p,
                const SeriesPolicy& policy) {
    return Gsn1(mu, sigma, p, policy).pdf(x);
}

double gsn1_quantile(double u, double mu, double sigma, double p,
                     const SeriesPolicy& policy) {
    return Gsn1(mu, sigma, p, policy).quantile(u);
}

// ---------------------------------------------------------------------------
// multivariate

namespace {

// The quadratic form (x - k mu)' Sigma^{-1} (x - k mu) expands into
// A - 2kB + k^2 C with A = x'S^{-1}x, B = mu'S^{-1}x, C = mu'S^{-1}mu,
// so the k-series needs only three inner products per point.
struct QuadParts {
    double a, b, c;
};

QuadParts quad_parts(const Eigen::VectorXd& x, const GsnParams& params) {
    const Eigen::MatrixXd& L = params.sigma().chol_lower();
    Eigen::VectorXd sx = L.triangularView<Eigen::Lower>().solve(x);
    Eigen::VectorXd sm = L.triangularView<Eigen::Lower>().solve(params.mu());
    return {sx.squaredNorm(), sm.dot(sx), sm.squaredNorm()};
}

// Per-k constants of the log-density series: log weight minus normal
// normalization.  Shared across all evaluation points of a batch.
std::vector<double> logpdf_constants(double p, int K, int d, double log_det) {
    std::vector<double> c(static_cast<size_t>(K));
    const double logp = std::log(p);
    const double log1mp = (p < 1.0) ? std::log1p(-p) : 0.0;
    for (int k = 1; k <= K; ++k) {
        c[k - 1] = logp + (k - 1) * log1mp -
                   0.5 * d * (kLog2Pi + std::log(static_cast<double>(k))) -
                   0.5 * log_det;
    }
    return c;
}

double logpdf_from_parts(const QuadParts& q, const std::vector<double>& consts) {
    const int K = static_cast<int>(consts.size());
    double m = -kInf;
    for (int k = 1; k <= K; ++k) {
        const double t = consts[k - 1] - 0.5 * (q.a / k - 2.0 * q.b + k * q.c);
        m = std::max(m, t);
    }
    if (m == -kInf) return -kInf;
    double acc = 0.0;
    for (int k = 1; k <= K; ++k) {
        const double t = consts[k - 1] - 0.5 * (q.a / k - 2.0 * q.b + k * q.c);
        acc += std::exp(t - m);
    }
    return m + std::log(acc);
}

} // namespace

double mgsn_logpdf(const Eigen::VectorXd& x, const GsnParams& params,
                   const SeriesPolicy& policy) {
    if (x.size() != params.dim()) {
        throw std::invalid_argument("mgsn_logpdf: dimension mismatch");
    }
    const int K = series_length(params.p(), policy);
    const std::vector<double> consts =
        logpdf_constants(params.p(), K, params.dim(), params.sigma().log_det());
    return logpdf_from_parts(quad_parts(x, params), consts);
}

double mgsn_pdf(const Eigen::VectorXd& x, const GsnParams& params,
                const SeriesPolicy& policy) {
    return std::exp(mgsn_logpdf(x, params, policy));
}

Eigen::VectorXd mgsn_logpdf_batch(const Eigen::MatrixXd& x,
                                  const GsnParams& params,
                                  const SeriesPolicy& policy) {
    const int m = static_cast<int>(x.rows());
    const int d = params.dim();
    if (x.cols() != d) {
        throw std::invalid_argument("mgsn_logpdf_batch: dimension mismatch");
    }
    const int K = series_length(params.p(), policy);
    const std::vector<double> consts =
        logpdf_constants(params.p(), K, d, params.sigma().log_det());
    const Eigen::MatrixXd& L = params.sigma().chol_lower();
    Eigen::MatrixXd sx =
        L.triangularView<Eigen::Lower>().solve(x.transpose());  // d x m
    Eigen::VectorXd sm = L.triangularView<Eigen::Lower>().solve(params.mu());
    const double c = sm.squaredNorm();
    Eigen::VectorXd out(m);
    for (int i = 0; i < m; ++i) {
        QuadParts q{sx.col(i).squaredNorm(), sm.dot(sx.col(i)), c};
        out(i) = logpdf_from_parts(q, consts);
    }
    return out;
}

Eigen::VectorXd mgsn_logpdf_batch_cov(const Eigen::MatrixXd& x, double p,
                                      const Eigen::VectorXd& mu,
                                      const Eigen::MatrixXd& cov,
                                      const SeriesPolicy& policy) {
    const int m = static_cast<int>(x.rows());
    const int d = static_cast<int>(mu.size());
    if (x.cols() != d || cov.rows() != d || cov.cols() != d) {
        throw std::invalid_argument("mgsn_logpdf_batch_cov: dimension mismatch");
    }
    const Eigen::MatrixXd L = cholesky_lower(cov);
    const double log_det = 2.0 * L.diagonal().array().log().sum();
    const int K = series_length(p, policy);
    const std::vector<double> consts = logpdf_constants(p, K, d, log_det);
    Eigen::MatrixXd sx = L.triangularView<Eigen::Lower>().solve(x.transpose());
    Eigen::VectorXd sm = L.triangularView<Eigen::Lower>().solve(mu);
    const double c = sm.squaredNorm();
    Eigen::VectorXd out(m);
    for (int i = 0; i < m; ++i) {
        QuadParts q{sx.col(i).squaredNorm(), sm.dot(sx.col(i)), c};
        out(i) = logpdf_from_parts(q, consts);
    }
    return out;
}

double mgsn_cdf(const Eigen::VectorXd& x, const GsnParams& params,
                const SeriesPolicy& policy) {
    const int d = params.dim();
    if (x.size() != d) {
        throw std::invalid_argument("mgsn_cdf: dimension mismatch");
    }
    const int K = series_length(params.p(), policy);
    const std::vector<double> w = geometric_weights(params.p(), K);
    double s = 0.0;
    for (int k = 1; k <= K; ++k) {
        const double rsk = 1.0 / std::sqrt(static_cast<double>(k));
        if (d == 1) {
            s += w[k - 1] * norm_cdf((x(0) - k * params.mu()(0)) * rsk);
        } else if (d == 2) {
            s += w[k - 1] * bvn_cdf((x(0) - k * params.mu()(0)) * rsk,
                                    (x(1) - k * params.mu()(1)) * rsk,
                                    params.sigma()(0, 1));
        } else {
            QmcEstimate e = mvn_cdf(x, k * params.mu(),
                                    k * params.sigma().matrix(), policy);
            s += w[k - 1] * e.value;
        }
    }
    return std::min(1.0, std::max(0.0, s));
}

Eigen::MatrixXd mgsn_sample(const GsnParams& params, int n,
                            RandomStream& stream) {
    if (n < 1) {
        throw std::invalid_argument("mgsn_sample: need n >= 1");
    }
    const int d = params.dim();
    const Eigen::MatrixXd& L = params.sigma().chol_lower();
    Eigen::MatrixXd out(n, d);
    Eigen::VectorXd z(d);
    for (int i = 0; i < n; ++i) {
        const double count = static_cast<double>(stream.geometric(params.p()));
        for (int j = 0; j < d; ++j) z(j) = stream.normal();
        out.row(i) = (count * params.mu() + std::sqrt(count) * (L * z)).transpose();
    }
    return out;
}

double mgsn_corr(const GsnParams& params, int i, int j) {
    const int d = params.dim();
    if (i < 0 || j < 0 || i >= d || j >= d) {
        throw std::invalid_argument("mgsn_corr: index out of range");
    }
    if (i == j) {
        throw std::invalid_argument("mgsn_corr: need i != j");
    }
    const double p = params.p();
    const double mi = params.mu()(i);
    const double mj = params.mu()(j);
    const double num = p * params.sigma()(i, j) + mi * mj * (1.0 - p);
    const double den = std::sqrt(p + mi * mi * (1.0 - p)) *
                       std::sqrt(p + mj * mj * (1.0 - p));
    return num / den;
}

GsnParams marginal_params(const GsnParams& params, const std::vector<int>& keep) {
    if (keep.empty()) {
        throw std::invalid_argument("marginal_params: empty index set");
    }
    Eigen::VectorXd mu(static_cast<int>(keep.size()));
    for (size_t a = 0; a < keep.size(); ++a) {
        if (keep[a] < 0 || keep[a] >= params.dim()) {
            throw std::invalid_argument("marginal_params: index out of range");
        }
        mu(static_cast<int>(a)) = params.mu()(keep[a]);
    }
    return GsnParams(params.p(), mu, params.sigma().submatrix(keep));
}

double gsn2_rectangle(double xlo1, double xhi1, double xlo2, double xhi2,
                      double mu1, double mu2, double rho, double p,
                      const SeriesPolicy& policy) {
    if (xhi1 < xlo1 || xhi2 < xlo2) {
        throw std::invalid_argument("gsn2_rectangle: inverted bounds");
    }
    const int K = series_length(p, policy);
    const std::vector<double> w = geometric_weights(p, K);
    double s = 0.0;
    for (int k = 1; k <= K; ++k) {
        const double rsk = 1.0 / std::sqrt(static_cast<double>(k));
        s += w[k - 1] * bvn_rectangle((xlo1 - k * mu1) * rsk, (xhi1 - k * mu1) * rsk,
                                      (xlo2 - k * mu2) * rsk, (xhi2 - k * mu2) * rsk,
                                      rho);
    }
    return std::min(1.0, std::max(0.0, s));
}

} // namespace gsncop
