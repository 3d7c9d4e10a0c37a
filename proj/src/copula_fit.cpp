#include "gsncop/copula_fit.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "gsncop/copula.hpp"
#include "gsncop/errors.hpp"
#include "gsncop/normal.hpp"

namespace gsncop {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
} // namespace

int n_free_params(int d) { return 1 + d + d * (d - 1) / 2; }

Eigen::VectorXd pack_params(const GsnParams& params) {
    const int d = params.dim();
    Eigen::VectorXd theta(n_free_params(d));
    theta(0) = params.p();
    theta.segment(1, d) = params.mu();
    int pos = 1 + d;
    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) theta(pos++) = params.sigma()(i, j);
    }
    return theta;
}

GsnParams unpack_params(const Eigen::VectorXd& theta, int d) {
    if (theta.size() != n_free_params(d)) {
        throw std::invalid_argument("unpack_params: bad length");
    }
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Identity(d, d);
    int pos = 1 + d;
    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
            sigma(i, j) = sigma(j, i) = theta(pos++);
        }
    }
    return GsnParams(theta(0), theta.segment(1, d), CorrelationMatrix(sigma));
}

std::vector<std::string> param_names(int d) {
    std::vector<std::string> names;
    names.push_back("p");
    for (int j = 1; j <= d; ++j) names.push_back("mu" + std::to_string(j));
    for (int i = 1; i <= d; ++i) {
        for (int j = i + 1; j <= d; ++j) {
            names.push_back("rho" + std::to_string(i) + std::to_string(j));
        }
    }
    return names;
}

// ---------------------------------------------------------------------------
// objectives

CopulaLoglik::CopulaLoglik(Eigen::MatrixXd pseudo_sample, SeriesPolicy policy)
    : u_(std::move(pseudo_sample)), policy_(policy) {
    if (u_.rows() < 1 || u_.cols() < 1) {
        throw std::invalid_argument("CopulaLoglik: empty pseudo sample");
    }
    ClampStats stats;
    for (int i = 0; i < u_.rows(); ++i) {
        for (int j = 0; j < u_.cols(); ++j) {
            if (!(u_(i, j) > 0.0 && u_(i, j) < 1.0)) {
                std::ostringstream os;
                os << "CopulaLoglik: entry (" << i << "," << j << ") outside (0,1)";
                throw std::invalid_argument(os.str());
            }
            u_(i, j) = clamp_unit(u_(i, j), &stats);
        }
    }
    clamped_ = stats.clamped;
    cols_.resize(static_cast<size_t>(u_.cols()));
    x_.resize(u_.rows(), u_.cols());
}

void CopulaLoglik::ensure_columns(double p, const Eigen::VectorXd& mu) {
    const int m = n_obs();
    for (int j = 0; j < dim(); ++j) {
        Column& col = cols_[static_cast<size_t>(j)];
        if (col.p == p && col.mu == mu(j)) {
            ++hits_;
            continue;
        }
        Gsn1 margin(mu(j), 1.0, p, policy_);
        const bool warm = (col.x.size() == m);
        Eigen::VectorXd x(m), logf(m);
        for (int i = 0; i < m; ++i) {
            const double x0 =
                warm ? col.x(i) : std::numeric_limits<double>::quiet_NaN();
            x(i) = margin.quantile(u_(i, j), x0);
            logf(i) = margin.logpdf(x(i));
        }
        col.p = p;
        col.mu = mu(j);
        col.x = std::move(x);
        col.logf = std::move(logf);
        x_.col(j) = col.x;
        recomputes_ += m;
    }
}

double CopulaLoglik::eval(const GsnParams& params) {
    ensure_columns(params.p(), params.mu());
    const Eigen::VectorXd num = mgsn_logpdf_batch(x_, params, policy_);
    double denom = 0.0;
    for (const Column& col : cols_) denom += col.logf.sum();
    return num.sum() - denom;
}

double CopulaLoglik::eval_packed(const Eigen::VectorXd& theta) {
    try {
        return eval(unpack_params(theta, dim()));
    } catch (const std::invalid_argument&) {
        return kNegInf;  // outside the parameter space
    } catch (const NumericError&) {
        return kNegInf;  // rejected trial point
    }
}

Eigen::VectorXd CopulaLoglik::per_observation(const Eigen::VectorXd& theta) {
    GsnParams params = unpack_params(theta, dim());
    ensure_columns(params.p(), params.mu());
    Eigen::VectorXd out = mgsn_logpdf_batch(x_, params, policy_);
    for (const Column& col : cols_) out -= col.logf;
    return out;
}

MgsnLoglik::MgsnLoglik(Eigen::MatrixXd data, SeriesPolicy policy)
    : x_(std::move(data)), policy_(policy) {
    if (x_.rows() < 1 || x_.cols() < 1) {
        throw std::invalid_argument("MgsnLoglik: empty data");
    }
    if (!x_.allFinite()) {
        throw std::invalid_argument("MgsnLoglik: data must be finite");
    }
}

double MgsnLoglik::eval(const GsnParams& params) {
    return mgsn_logpdf_batch(x_, params, policy_).sum();
}

double MgsnLoglik::eval_packed(const Eigen::VectorXd& theta) {
    try {
        return eval(unpack_params(theta, dim()));
    } catch (const std::invalid_argument&) {
        return kNegInf;
    } catch (const NumericError&) {
        return kNegInf;
    }
}

Eigen::VectorXd MgsnLoglik::per_observation(const Eigen::VectorXd& theta) {
    return mgsn_logpdf_batch(x_, unpack_params(theta, dim()), policy_);
}

double copula_loglik(const Eigen::MatrixXd& pseudo, const GsnParams& params,
                     const SeriesPolicy& policy) {
    CopulaLoglik obj(pseudo, policy);
    return obj.eval(params);
}

// ---------------------------------------------------------------------------
// moment / profile initializer

namespace {

struct MomentParts {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;  // maximum-likelihood scaling (divide by n)
};

MomentParts sample_moments(const Eigen::MatrixXd& data) {
    const int n = static_cast<int>(data.rows());
    MomentParts parts;
    parts.mean = data.colwise().mean();
    Eigen::MatrixXd centered = data.rowwise() - parts.mean.transpose();
    parts.cov = centered.transpose() * centered / static_cast<double>(n);
    return parts;
}

// mu and Sigma implied by the moment identities at a fixed p.
void mom_at_p(const MomentParts& parts, double p, Eigen::VectorXd& mu,
              Eigen::MatrixXd& cov) {
    mu = p * parts.mean;
    cov = p * parts.cov - p * (1.0 - p) * parts.mean * parts.mean.transpose();
}

double profile_loglik(const Eigen::MatrixXd& data, const MomentParts& parts,
                      double p, const SeriesPolicy& policy) {
    Eigen::VectorXd mu;
    Eigen::MatrixXd cov;
    mom_at_p(parts, p, mu, cov);
    try {
        return mgsn_logpdf_batch_cov(data, p, mu, cov, policy).sum();
    } catch (const FactorizationError&) {
        return kNegInf;
    } catch (const std::invalid_argument&) {
        return kNegInf;
    }
}

} // namespace

GsnParams mom_profile_init(const Eigen::MatrixXd& data,
                           const SeriesPolicy& policy, bool correlation_scale) {
    const int n = static_cast<int>(data.rows());
    const int d = static_cast<int>(data.cols());
    if (n <= d) {
        throw DataError("mom_profile_init: need more observations than dimensions");
    }
    MomentParts parts = sample_moments(data);
    if (parts.cov.diagonal().minCoeff() <= 0.0) {
        throw DataError("mom_profile_init: degenerate sample covariance");
    }

    // coarse grid, then golden-section refinement of the profile likelihood
    auto profile = [&](double p) { return profile_loglik(data, parts, p, policy); };
    const double p_lo = 0.01, p_hi = 1.0;
    double best_p = 0.5, best_ll = kNegInf;
    const int grid = 25;
    for (int g = 0; g <= grid; ++g) {
        const double p = p_lo + (p_hi - p_lo) * g / grid;
        const double ll = profile(p);
        if (ll > best_ll) {
            best_ll = ll;
            best_p = p;
        }
    }
    const double width = (p_hi - p_lo) / grid;
    double a = std::max(p_lo, best_p - width);
    double b = std::min(p_hi, best_p + width);
    const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - golden * (b - a), x2 = a + golden * (b - a);
    double f1 = profile(x1), f2 = profile(x2);
    for (int it = 0; it < 40 && b - a > 1e-6; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + golden * (b - a);
            f2 = profile(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - golden * (b - a);
            f1 = profile(x1);
        }
    }
    const double p_tilde = 0.5 * (a + b);

    Eigen::VectorXd mu;
    Eigen::MatrixXd cov;
    mom_at_p(parts, p_tilde, mu, cov);
    Eigen::MatrixXd sigma;
    if (correlation_scale) {
        Eigen::VectorXd scale =
            cov.diagonal().cwiseMax(1e-12).cwiseSqrt().cwiseInverse();
        sigma = scale.asDiagonal() * cov * scale.asDiagonal();
    } else {
        sigma = cov;
    }
    sigma = nearest_pd_correlation(sigma, 1e-6);
    return GsnParams(p_tilde, mu, CorrelationMatrix(sigma));
}

GsnParams mom_profile_init_pseudo(const Eigen::MatrixXd& pseudo,
                                  const SeriesPolicy& policy) {
    const int m = static_cast<int>(pseudo.rows());
    const int d = static_cast<int>(pseudo.cols());
    Eigen::MatrixXd z(m, d);
    ClampStats stats;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < d; ++j) {
            z(i, j) = norm_quantile(clamp_unit(pseudo(i, j), &stats));
        }
    }
    GsnParams first = mom_profile_init(z, policy, true);

    // refinement: re-score the pseudo-sample with GSN quantiles at the
    // first-pass parameters, then redo the moment/profile step
    Eigen::MatrixXd z2(m, d);
    for (int j = 0; j < d; ++j) {
        Gsn1 margin(first.mu()(j), 1.0, first.p(), policy);
        double warm = std::numeric_limits<double>::quiet_NaN();
        for (int i = 0; i < m; ++i) {
            z2(i, j) = margin.quantile(clamp_unit(pseudo(i, j), &stats), warm);
            warm = z2(i, j);
        }
    }
    return mom_profile_init(z2, policy, true);
}

// ---------------------------------------------------------------------------
// two-block coordinate ascent

UnrestrictedFit fit_block_ascent(PackedObjective& objective,
                                 const GsnParams& init,
                                 const BlockAscentOptions& opts) {
    const int d = objective.dim();
    if (init.dim() != d) {
        throw std::invalid_argument("fit_block_ascent: init dimension mismatch");
    }
    const int q = n_free_params(d);
    const int n_block1 = 1 + d;

    Eigen::VectorXd theta = pack_params(init);
    Eigen::VectorXd lo(q), hi(q);
    lo(0) = opts.p_lo;
    hi(0) = opts.p_hi;
    for (int j = 0; j < d; ++j) {
        lo(1 + j) = -opts.mu_bound;
        hi(1 + j) = opts.mu_bound;
    }
    for (int r = n_block1; r < q; ++r) {
        lo(r) = -opts.rho_bound;
        hi(r) = opts.rho_bound;
    }
    if (opts.fix_block1) {
        for (int r = 0; r < n_block1; ++r) lo(r) = hi(r) = theta(r);
    }
    theta = theta.cwiseMax(lo).cwiseMin(hi);

    long long quantile_base = 0;
    if (auto* cop = dynamic_cast<CopulaLoglik*>(&objective)) {
        quantile_base = cop->quantile_recomputes();
    }

    FitTrace trace;
    double ll = objective.eval_packed(theta);
    if (!std::isfinite(ll)) {
        throw NumericError("fit_block_ascent: objective not finite at initializer");
    }
    trace.loglik.push_back(ll);
    trace.param_path.push_back(theta);

    auto solve_block = [&](int offset, int count) {
        Eigen::VectorXd sub = theta.segment(offset, count);
        auto f = [&](const Eigen::VectorXd& s) {
            Eigen::VectorXd full = theta;
            full.segment(offset, count) = s;
            return objective.eval_packed(full);
        };
        BoxResult res =
            box_maximize(f, sub, lo.segment(offset, count), hi.segment(offset, count),
                         opts.inner);
        if (res.f >= ll) {
            theta.segment(offset, count) = res.x;
            ll = res.f;
        }
    };

    for (int outer = 1; outer <= opts.max_outer; ++outer) {
        const double ll_before = ll;
        if (!opts.fix_block1) solve_block(0, n_block1);
        if (q > n_block1) solve_block(n_block1, q - n_block1);
        trace.loglik.push_back(ll);
        trace.param_path.push_back(theta);
        trace.outer_iterations = outer;
        if (ll - ll_before < opts.outer_tol) {
            trace.converged = true;
            break;
        }
    }

    if (auto* cop = dynamic_cast<CopulaLoglik*>(&objective)) {
        trace.quantile_recomputes = cop->quantile_recomputes() - quantile_base;
        trace.clamped = cop->clamped();
    }
    // leave the evaluator caches aligned with the returned parameters
    objective.eval_packed(theta);
    return {unpack_params(theta, d), std::move(trace)};
}

UnrestrictedFit fit_mgsn_mle(const Eigen::MatrixXd& data,
                             const SeriesPolicy& policy, BlockAscentOptions opts,
                             const std::optional<GsnParams>& init) {
    MgsnLoglik objective(data, policy);
    opts.p_hi = 1.0;
    GsnParams start = init ? *init : mom_profile_init(data, policy, true);
    return fit_block_ascent(objective, start, opts);
}

UnrestrictedFit fit_gsn_copula_mle(const Eigen::MatrixXd& pseudo,
                                   const SeriesPolicy& policy,
                                   BlockAscentOptions opts,
                                   const std::optional<GsnParams>& init) {
    CopulaLoglik objective(pseudo, policy);
    GsnParams start = init ? *init : mom_profile_init_pseudo(pseudo, policy);
    if (start.p() > opts.p_hi) {
        start = GsnParams(opts.p_hi, start.mu(), start.sigma());
    }
    return fit_block_ascent(objective, start, opts);
}

// ---------------------------------------------------------------------------
// observed information

ObservedInfo observed_info(PackedObjective& objective,
                           const Eigen::VectorXd& theta, double fd_step) {
    const int q = static_cast<int>(theta.size());
    const int m = objective.n_obs();
    Eigen::MatrixXd scores(m, q);
    for (int r = 0; r < q; ++r) {
        const double h = fd_step * std::max(1.0, std::fabs(theta(r)));
        Eigen::VectorXd tp = theta, tm = theta;
        tp(r) += h;
        tm(r) -= h;
        Eigen::VectorXd lp, lm;
        bool ok_p = true, ok_m = true;
        try {
            lp = objective.per_observation(tp);
        } catch (...) {
            ok_p = false;
        }
        try {
            lm = objective.per_observation(tm);
        } catch (...) {
            ok_m = false;
        }
        if (ok_p && ok_m) {
            scores.col(r) = (lp - lm) / (2.0 * h);
        } else if (ok_p) {
            scores.col(r) = (lp - objective.per_observation(theta)) / h;
        } else if (ok_m) {
            scores.col(r) = (objective.per_observation(theta) - lm) / h;
        } else {
            scores.col(r).setZero();
        }
    }
    ObservedInfo out;
    out.info = scores.transpose() * scores;
    out.se = se_from_information(out.info, &out.pseudo_inverse_used);
    return out;
}

Eigen::VectorXd se_from_information(const Eigen::MatrixXd& info,
                                    bool* pseudo_inverse_used) {
    const int q = static_cast<int>(info.rows());
    if (pseudo_inverse_used) *pseudo_inverse_used = false;
    Eigen::LLT<Eigen::MatrixXd> llt(info);
    Eigen::MatrixXd inv;
    if (llt.info() == Eigen::Success) {
        inv = llt.solve(Eigen::MatrixXd::Identity(q, q));
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(info);
        const double floor = 1e-12 * std::max(1.0, es.eigenvalues().maxCoeff());
        Eigen::VectorXd ev = es.eigenvalues();
        for (int i = 0; i < q; ++i) ev(i) = (ev(i) > floor) ? 1.0 / ev(i) : 0.0;
        inv = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
        if (pseudo_inverse_used) *pseudo_inverse_used = true;
    }
    return inv.diagonal().cwiseMax(0.0).cwiseSqrt();
}

} // namespace gsncop
