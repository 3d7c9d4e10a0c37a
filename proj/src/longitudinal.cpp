#include "gsncop/longitudinal.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "gsncop/copula.hpp"
#include "gsncop/copula_fit.hpp"
#include "gsncop/errors.hpp"
#include "gsncop/gsn.hpp"
#include "gsncop/linalg.hpp"

namespace gsncop {

int LongitudinalDataset::total_obs() const {
    int n = 0;
    for (const Cluster& c : clusters) n += c.size();
    return n;
}

void LongitudinalDataset::validate() const {
    for (const Cluster& c : clusters) {
        if (c.size() < 1) {
            throw DataError("dataset: empty cluster '" + c.id + "'");
        }
        if (c.y.size() != c.size() || c.x.rows() != c.size() ||
            c.x.cols() != static_cast<int>(covariate_names.size())) {
            throw DataError("dataset: inconsistent shapes in cluster '" + c.id + "'");
        }
        for (int j = 1; j < c.size(); ++j) {
            if (!(c.times[static_cast<size_t>(j)] >
                  c.times[static_cast<size_t>(j - 1)])) {
                throw DataError("dataset: times not strictly increasing for '" +
                                c.id + "'");
            }
        }
    }
}

std::string to_string(CorrKind kind) {
    return kind == CorrKind::exchangeable ? "exchangeable" : "ar1";
}

Eigen::MatrixXd build_correlation(CorrKind kind, double xi,
                                  const std::vector<double>& times) {
    if (!(xi > 0.0)) {
        throw std::invalid_argument("build_correlation: xi must be positive");
    }
    const int n = static_cast<int>(times.size());
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Identity(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double rho =
                kind == CorrKind::exchangeable
                    ? std::exp(-xi)
                    : std::exp(-xi * std::fabs(times[static_cast<size_t>(i)] -
                                               times[static_cast<size_t>(j)]));
            sigma(i, j) = sigma(j, i) = rho;
        }
    }
    return sigma;
}

PitResult pit_transform(const LongitudinalDataset& data,
                        const MarginalModel& marginal) {
    PitResult out;
    ClampStats stats;
    out.u.reserve(data.clusters.size());
    for (const Cluster& c : data.clusters) {
        Eigen::VectorXd u(c.size());
        for (int j = 0; j < c.size(); ++j) {
            u(j) = clamp_unit(marginal.cdf(c.y(j), c.x.row(j)), &stats);
        }
        out.u.push_back(std::move(u));
    }
    out.clamped = stats.clamped;
    return out;
}

// ---------------------------------------------------------------------------
// stage-2 objective

ClusterCopulaLoglik::ClusterCopulaLoglik(const PitResult& pit,
                                         const LongitudinalDataset& data,
                                         CorrKind kind, SeriesPolicy policy)
    : policy_(policy), kind_(kind) {
    if (pit.u.size() != data.clusters.size()) {
        throw std::invalid_argument("ClusterCopulaLoglik: cluster count mismatch");
    }
    clamped_ = pit.clamped;
    int total = 0;
    for (const Eigen::VectorXd& u : pit.u) total += static_cast<int>(u.size());
    u_flat_.resize(total);
    x_flat_.resize(total);
    logf_flat_.resize(total);
    int offset = 0;
    for (size_t i = 0; i < pit.u.size(); ++i) {
        const int ni = static_cast<int>(pit.u[i].size());
        sizes_.push_back(ni);
        offsets_.push_back(offset);
        times_.push_back(data.clusters[i].times);
        ClampStats stats;
        for (int j = 0; j < ni; ++j) {
            u_flat_(offset + j) = clamp_unit(pit.u[i](j), &stats);
        }
        clamped_ += stats.clamped;
        if (ni > 1) ++multi_obs_clusters_;
        offset += ni;
    }
}

void ClusterCopulaLoglik::ensure_quantiles(double p, double mu_bar) {
    if (cached_p_ == p && cached_mu_ == mu_bar) return;
    Gsn1 margin(mu_bar, 1.0, p, policy_);
    const bool warm = std::isfinite(cached_p_);
    for (size_t c = 0; c < sizes_.size(); ++c) {
        if (sizes_[c] < 2) continue;  // singletons never enter the likelihood
        const int off = offsets_[c];
        for (int j = 0; j < sizes_[c]; ++j) {
            const double x0 =
                warm ? x_flat_(off + j) : std::numeric_limits<double>::quiet_NaN();
            x_flat_(off + j) = margin.quantile(u_flat_(off + j), x0);
            logf_flat_(off + j) = margin.logpdf(x_flat_(off + j));
            ++recomputes_;
        }
    }
    cached_p_ = p;
    cached_mu_ = mu_bar;
}

Eigen::VectorXd ClusterCopulaLoglik::per_cluster(double p, double xi,
                                                 double mu_bar) {
    ensure_quantiles(p, mu_bar);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n_clusters());

    // clusters sharing a time signature share one factorization per eval
    std::map<std::vector<double>, std::vector<int>> groups;
    for (int c = 0; c < n_clusters(); ++c) {
        if (sizes_[static_cast<size_t>(c)] < 2) continue;
        groups[times_[static_cast<size_t>(c)]].push_back(c);
    }
    for (const auto& [times, members] : groups) {
        const int d = static_cast<int>(times.size());
        CorrelationMatrix sigma(build_correlation(kind_, xi, times));
        GsnParams params(p, Eigen::VectorXd::Constant(d, mu_bar), sigma);
        Eigen::MatrixXd pts(static_cast<int>(members.size()), d);
        for (size_t r = 0; r < members.size(); ++r) {
            const int off = offsets_[static_cast<size_t>(members[r])];
            pts.row(static_cast<int>(r)) = x_flat_.segment(off, d).transpose();
        }
        Eigen::VectorXd nums = mgsn_logpdf_batch(pts, params, policy_);
        for (size_t r = 0; r < members.size(); ++r) {
            const int c = members[r];
            const int off = offsets_[static_cast<size_t>(c)];
            out(c) = nums(static_cast<int>(r)) - logf_flat_.segment(off, d).sum();
        }
    }
    return out;
}

double ClusterCopulaLoglik::eval(double p, double xi, double mu_bar) {
    return per_cluster(p, xi, mu_bar).sum();
}

// ---------------------------------------------------------------------------
// stage-2 fit

Eigen::VectorXd CopulaStageFit::packed() const {
    if (gaussian) {
        Eigen::VectorXd phi(1);
        phi << structure.xi;
        return phi;
    }
    Eigen::VectorXd phi(3);
    phi << p, structure.xi, structure.mu_bar;
    return phi;
}

std::vector<std::string> CopulaStageFit::names() const {
    if (gaussian) return {"xi"};
    return {"p", "xi", "mu_bar"};
}

CopulaStageFit fit_copula_stage(const PitResult& pit,
                                const LongitudinalDataset& data, CorrKind kind,
                                const SeriesPolicy& policy,
                                bool gaussian_baseline) {
    ClusterCopulaLoglik objective(pit, data, kind, policy);
    CopulaStageFit fit;
    fit.structure.kind = kind;
    fit.gaussian = gaussian_baseline;
    fit.clamped = objective.clamped();
    fit.xi_identified = objective.xi_identified();
    if (!fit.xi_identified) {
        // all clusters are singletons: the copula likelihood is identically 0
        fit.structure.xi = std::numeric_limits<double>::quiet_NaN();
        fit.structure.mu_bar = gaussian_baseline ? 0.0 : std::numeric_limits<double>::quiet_NaN();
        fit.p = gaussian_baseline ? 1.0 : std::numeric_limits<double>::quiet_NaN();
        fit.loglik = 0.0;
        fit.converged = true;
        return fit;
    }

    const double xi_lo = 1e-4, xi_hi = 20.0;
    BoxOptions inner;
    inner.max_iters = 300;

    // quantile failures and factorization rejections at extreme trial points
    // become -inf penalties, never crashes
    auto guarded = [&](double p, double xi, double mu_bar) {
        try {
            return objective.eval(p, xi, mu_bar);
        } catch (const NumericError&) {
            return -std::numeric_limits<double>::infinity();
        } catch (const std::invalid_argument&) {
            return -std::numeric_limits<double>::infinity();
        }
    };

    if (gaussian_baseline) {
        auto f = [&](const Eigen::VectorXd& v) {
            if (!(v(0) > 0.0)) return -std::numeric_limits<double>::infinity();
            return guarded(1.0, v(0), 0.0);
        };
        double best_xi = 0.7, best_ll = -std::numeric_limits<double>::infinity();
        for (double xi0 : {0.15, 0.3, 0.7, 1.5, 3.0}) {
            Eigen::VectorXd v(1);
            v << xi0;
            const double ll = f(v);
            if (ll > best_ll) {
                best_ll = ll;
                best_xi = xi0;
            }
        }
        Eigen::VectorXd x0(1), lo(1), hi(1);
        x0 << best_xi;
        lo << xi_lo;
        hi << xi_hi;
        BoxResult res = box_maximize(f, x0, lo, hi, inner);
        fit.p = 1.0;
        fit.structure.xi = res.x(0);
        fit.structure.mu_bar = 0.0;
        fit.loglik = res.f;
        fit.iterations = res.iterations;
        fit.evaluations = res.evaluations;
        fit.converged = res.converged;
        fit.quantile_recomputes = objective.quantile_recomputes();
        return fit;
    }

    auto f = [&](const Eigen::VectorXd& v) {
        if (!(v(0) > 0.0 && v(0) < 1.0) || !(v(1) > 0.0)) {
            return -std::numeric_limits<double>::infinity();
        }
        return guarded(v(0), v(1), v(2));
    };
    Eigen::VectorXd best(3);
    double best_ll = -std::numeric_limits<double>::infinity();
    for (double p0 : {0.3, 0.6, 0.85}) {
        for (double mu0 : {-1.0, 0.0, 1.0}) {
            for (double xi0 : {0.25, 0.5, 1.0, 2.0}) {
                Eigen::VectorXd v(3);
                v << p0, xi0, mu0;
                const double ll = f(v);
                if (ll > best_ll) {
                    best_ll = ll;
                    best = v;
                }
            }
        }
    }
    Eigen::VectorXd lo(3), hi(3);
    lo << 1e-4, xi_lo, -10.0;
    hi << 1.0 - 1e-4, xi_hi, 10.0;
    BoxResult res = box_maximize(f, best, lo, hi, inner);
    fit.p = res.x(0);
    fit.structure.xi = res.x(1);
    fit.structure.mu_bar = res.x(2);
    fit.loglik = res.f;
    fit.iterations = res.iterations;
    fit.evaluations = res.evaluations;
    fit.converged = res.converged;
    fit.quantile_recomputes = objective.quantile_recomputes();
    return fit;
}

// ---------------------------------------------------------------------------
// sandwich covariance

Eigen::VectorXd copula_part_per_subject(const LongitudinalDataset& data,
                                        MarginalFamily family,
                                        const Eigen::VectorXd& theta,
                                        CorrKind kind, bool gaussian,
                                        const Eigen::VectorXd& phi,
                                        const SeriesPolicy& policy) {
    MarginalModel marginal = unpack_marginal(family, theta);
    PitResult pit = pit_transform(data, marginal);
    ClusterCopulaLoglik objective(pit, data, kind, policy);
    if (gaussian) {
        return objective.per_cluster(1.0, phi(0), 0.0);
    }
    return objective.per_cluster(phi(0), phi(1), phi(2));
}

SandwichResult godambe_sandwich(const LongitudinalDataset& data,
                                const MarginalModel& marginal,
                                const CopulaStageFit& copula_fit,
                                const SeriesPolicy& policy) {
    const Eigen::VectorXd theta = pack_marginal(marginal);
    const Eigen::VectorXd phi = copula_fit.packed();
    const int q1 = static_cast<int>(theta.size());
    const int q2 = static_cast<int>(phi.size());
    const int q = q1 + q2;
    const int m = data.n_subjects();
    const MarginalFamily family = marginal.family;
    const CorrKind kind = copula_fit.structure.kind;
    const bool gaussian = copula_fit.gaussian;

    auto eval_phi_vec = [&](ClusterCopulaLoglik& ev, const Eigen::VectorXd& ph) {
        return gaussian ? ev.per_cluster(1.0, ph(0), 0.0)
                        : ev.per_cluster(ph(0), ph(1), ph(2));
    };
    PitResult pit_hat = pit_transform(data, marginal);
    ClusterCopulaLoglik ev_hat(pit_hat, data, kind, policy);

    // per-subject scores of both stages (central differences)
    Eigen::MatrixXd scores(m, q);
    const double h1 = 1e-5;
    for (int r = 0; r < q1; ++r) {
        const double h = h1 * std::max(1.0, std::fabs(theta(r)));
        Eigen::VectorXd tp = theta, tm = theta;
        tp(r) += h;
        tm(r) -= h;
        scores.col(r) = (marginal_per_subject_loglik(data, family, tp) -
                         marginal_per_subject_loglik(data, family, tm)) /
                        (2.0 * h);
    }
    for (int r = 0; r < q2; ++r) {
        const double h = h1 * std::max(1.0, std::fabs(phi(r)));
        Eigen::VectorXd pp = phi, pm = phi;
        pp(r) += h;
        pm(r) -= h;
        scores.col(q1 + r) =
            (eval_phi_vec(ev_hat, pp) - eval_phi_vec(ev_hat, pm)) / (2.0 * h);
    }
    Eigen::MatrixXd variability = scores.transpose() * scores;

    // sensitivity: block triangular in (theta, phi)
    auto marg_total = [&](const Eigen::VectorXd& t) {
        return marginal_per_subject_loglik(data, family, t).sum();
    };
    Eigen::MatrixXd a11 = numeric_hessian(marg_total, theta);

    // phi-phi block on the fixed transform
    auto cop_phi = [&](const Eigen::VectorXd& ph) {
        return eval_phi_vec(ev_hat, ph).sum();
    };
    Eigen::MatrixXd a22 = numeric_hessian(cop_phi, phi);

    // mixed phi-theta block: re-transform per theta perturbation, reuse the
    // evaluator across the phi perturbations
    Eigen::MatrixXd a21(q2, q1);
    const double h2 = 1e-4;
    for (int s = 0; s < q1; ++s) {
        const double hs = h2 * std::max(1.0, std::fabs(theta(s)));
        Eigen::VectorXd tp = theta, tm = theta;
        tp(s) += hs;
        tm(s) -= hs;
        PitResult pit_p = pit_transform(data, unpack_marginal(family, tp));
        PitResult pit_m = pit_transform(data, unpack_marginal(family, tm));
        ClusterCopulaLoglik ev_p(pit_p, data, kind, policy);
        ClusterCopulaLoglik ev_m(pit_m, data, kind, policy);
        for (int r = 0; r < q2; ++r) {
            const double hr = h2 * std::max(1.0, std::fabs(phi(r)));
            Eigen::VectorXd pp = phi, pm = phi;
            pp(r) += hr;
            pm(r) -= hr;
            a21(r, s) = (eval_phi_vec(ev_p, pp).sum() - eval_phi_vec(ev_p, pm).sum() -
                         eval_phi_vec(ev_m, pp).sum() + eval_phi_vec(ev_m, pm).sum()) /
                        (4.0 * hr * hs);
        }
    }

    Eigen::MatrixXd sensitivity = Eigen::MatrixXd::Zero(q, q);
    sensitivity.topLeftCorner(q1, q1) = a11;
    sensitivity.bottomLeftCorner(q2, q1) = a21;
    sensitivity.bottomRightCorner(q2, q2) = a22;

    SandwichResult out;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(sensitivity);
    Eigen::MatrixXd a_inv;
    if (lu.isInvertible()) {
        a_inv = lu.inverse();
    } else {
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(sensitivity);
        a_inv = cod.pseudoInverse();
        out.pseudo_inverse_used = true;
    }
    out.covariance = a_inv * variability * a_inv.transpose();
    out.se = out.covariance.diagonal().cwiseMax(0.0).cwiseSqrt();

    out.names.push_back("beta0");
    for (int j = 0; j < data.n_covariates(); ++j) {
        out.names.push_back("beta_" + data.covariate_names[static_cast<size_t>(j)]);
    }
    out.names.push_back(family == MarginalFamily::gamma_log ? "kappa" : "sigma2");
    for (const std::string& n : copula_fit.names()) out.names.push_back(n);
    return out;
}

Eigen::VectorXd full_per_subject_loglik(const LongitudinalDataset& data,
                                        const MarginalModel& marginal,
                                        const CopulaStageFit& copula_fit,
                                        const SeriesPolicy& policy) {
    return marginal_per_subject_loglik(data, marginal.family,
                                       pack_marginal(marginal)) +
           copula_part_per_subject(data, marginal.family, pack_marginal(marginal),
                                   copula_fit.structure.kind, copula_fit.gaussian,
                                   copula_fit.packed(), policy);
}

} // namespace gsncop
