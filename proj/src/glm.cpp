#include "gsncop/glm.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "gsncop/errors.hpp"
#include "gsncop/normal.hpp"
#include "gsncop/special.hpp"

namespace gsncop {

double MarginalModel::linear_predictor(const Eigen::VectorXd& x) const {
    if (x.size() + 1 != beta.size()) {
        throw std::invalid_argument("MarginalModel: covariate length mismatch");
    }
    return beta(0) + beta.tail(beta.size() - 1).dot(x);
}

double MarginalModel::mean(const Eigen::VectorXd& x) const {
    const double eta = linear_predictor(x);
    return family == MarginalFamily::gamma_log ? std::exp(eta) : eta;
}

double MarginalModel::cdf(double y, const Eigen::VectorXd& x) const {
    if (family == MarginalFamily::gamma_log) {
        if (y <= 0.0) return 0.0;
        const double kappa = dispersion;
        return reg_inc_gamma_p(kappa, kappa * y / mean(x));
    }
    return norm_cdf((y - mean(x)) / std::sqrt(dispersion));
}

double MarginalModel::logpdf(double y, const Eigen::VectorXd& x) const {
    if (family == MarginalFamily::gamma_log) {
        if (y <= 0.0) return -std::numeric_limits<double>::infinity();
        const double kappa = dispersion;
        const double mu = mean(x);
        return kappa * std::log(kappa / mu) + (kappa - 1.0) * std::log(y) -
               kappa * y / mu - std::lgamma(kappa);
    }
    const double r = y - mean(x);
    return -0.5 * std::log(2.0 * M_PI * dispersion) - 0.5 * r * r / dispersion;
}

double MarginalModel::quantile(double u, const Eigen::VectorXd& x) const {
    if (!(u > 0.0 && u < 1.0)) {
        throw std::invalid_argument("MarginalModel::quantile: u must lie in (0,1)");
    }
    if (family == MarginalFamily::gamma_log) {
        const double kappa = dispersion;
        return inv_reg_inc_gamma_p(kappa, u) * mean(x) / kappa;
    }
    return mean(x) + std::sqrt(dispersion) * norm_quantile(u);
}

namespace {

// pooled design with intercept column
void pooled_design(const LongitudinalDataset& data, Eigen::MatrixXd& z,
                   Eigen::VectorXd& y) {
    const int n = data.total_obs();
    const int q = data.n_covariates();
    z.resize(n, q + 1);
    y.resize(n);
    int row = 0;
    for (const Cluster& c : data.clusters) {
        for (int j = 0; j < c.size(); ++j) {
            z(row, 0) = 1.0;
            z.row(row).tail(q) = c.x.row(j);
            y(row) = c.y(j);
            ++row;
        }
    }
}

double solve_gamma_shape(double c_bar) {
    // ML equation: log(kappa) - digamma(kappa) = c_bar
    if (c_bar <= 0.0) return 1e8;  // perfect fit edge
    double kappa = (3.0 - c_bar + std::sqrt((c_bar - 3.0) * (c_bar - 3.0) +
                                            24.0 * c_bar)) /
                   (12.0 * c_bar);
    if (!(kappa > 0.0) || !std::isfinite(kappa)) kappa = 1.0;
    for (int it = 0; it < 100; ++it) {
        const double f = std::log(kappa) - digamma(kappa) - c_bar;
        const double fp = 1.0 / kappa - trigamma(kappa);
        double step = f / fp;
        if (!std::isfinite(step)) break;
        double next = kappa - step;
        if (next <= 0.0) next = kappa / 2.0;
        if (std::fabs(next - kappa) < 1e-12 * std::max(1.0, kappa)) {
            kappa = next;
            break;
        }
        kappa = next;
    }
    return kappa;
}

} // namespace

MarginalModel fit_marginal_glm(const LongitudinalDataset& data,
                               MarginalFamily family) {
    data.validate();
    Eigen::MatrixXd z;
    Eigen::VectorXd y;
    pooled_design(data, z, y);
    const int n = static_cast<int>(z.rows());
    const int q1 = static_cast<int>(z.cols());
    if (n <= q1) {
        throw DataError("fit_marginal_glm: more parameters than observations");
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(z);
    if (qr.rank() < q1) {
        throw DataError("fit_marginal_glm: design matrix is rank deficient");
    }

    MarginalModel model;
    model.family = family;
    if (family == MarginalFamily::gaussian_identity) {
        model.beta = qr.solve(y);
        const double rss = (y - z * model.beta).squaredNorm();
        model.dispersion = rss / n;
        if (!(model.dispersion > 0.0)) {
            throw DataError("fit_marginal_glm: degenerate response");
        }
        return model;
    }

    if ((y.array() <= 0.0).any()) {
        throw DataError("fit_marginal_glm: gamma family needs positive responses");
    }
    // Fisher scoring for the log link: the information is kappa * Z'Z, so the
    // beta updates are free of the shape parameter.
    Eigen::LLT<Eigen::MatrixXd> ztz(z.transpose() * z);
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(q1);
    beta(0) = std::log(y.mean());
    for (int it = 0; it < 200; ++it) {
        Eigen::VectorXd mu = (z * beta).array().exp();
        Eigen::VectorXd score = z.transpose() * (y.array() / mu.array() - 1.0).matrix();
        Eigen::VectorXd step = ztz.solve(score);
        beta += step;
        if (step.cwiseAbs().maxCoeff() < 1e-12) break;
    }
    model.beta = beta;
    Eigen::VectorXd mu = (z * beta).array().exp();
    const double c_bar =
        ((y.array() / mu.array()) - 1.0 + mu.array().log() - y.array().log())
            .mean();
    model.dispersion = solve_gamma_shape(c_bar);
    return model;
}

Eigen::VectorXd pack_marginal(const MarginalModel& model) {
    Eigen::VectorXd packed(model.beta.size() + 1);
    packed.head(model.beta.size()) = model.beta;
    packed(model.beta.size()) = model.dispersion;
    return packed;
}

MarginalModel unpack_marginal(MarginalFamily family, const Eigen::VectorXd& packed) {
    MarginalModel model;
    model.family = family;
    model.beta = packed.head(packed.size() - 1);
    model.dispersion = packed(packed.size() - 1);
    return model;
}

Eigen::VectorXd marginal_per_subject_loglik(const LongitudinalDataset& data,
                                            MarginalFamily family,
                                            const Eigen::VectorXd& packed) {
    MarginalModel model = unpack_marginal(family, packed);
    Eigen::VectorXd out(data.n_subjects());
    for (int i = 0; i < data.n_subjects(); ++i) {
        const Cluster& c = data.clusters[static_cast<size_t>(i)];
        double ll = 0.0;
        for (int j = 0; j < c.size(); ++j) {
            ll += model.logpdf(c.y(j), c.x.row(j));
        }
        out(i) = ll;
    }
    return out;
}

} // namespace gsncop
