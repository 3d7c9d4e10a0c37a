#include "gsncop/model_eval.hpp"

#include <cmath>
#include <stdexcept>

#include "gsncop/normal.hpp"

namespace gsncop {

double aic(double loglik, int n_params) {
    if (!std::isfinite(loglik)) {
        throw std::invalid_argument("aic: log-likelihood must be finite");
    }
    return -2.0 * loglik + 2.0 * n_params;
}

double claic(double comp_loglik, const Eigen::MatrixXd& m,
             const Eigen::MatrixXd& d, bool* pseudo_inverse_used) {
    if (!std::isfinite(comp_loglik)) {
        throw std::invalid_argument("claic: composite log-likelihood must be finite");
    }
    const int q = static_cast<int>(d.rows());
    if (d.cols() != q || m.rows() != q || m.cols() != q) {
        throw std::invalid_argument("claic: matrix dimensions disagree");
    }
    if (pseudo_inverse_used) *pseudo_inverse_used = false;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(d);
    double penalty;
    if (lu.isInvertible()) {
        penalty = (m * lu.inverse()).trace();
    } else {
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(d);
        penalty = (m * cod.pseudoInverse()).trace();
        if (pseudo_inverse_used) *pseudo_inverse_used = true;
    }
    return -2.0 * comp_loglik + 2.0 * penalty;
}

ComparisonReport vuong_test(const std::vector<double>& per_subject_logliks_1,
                            const std::vector<double>& per_subject_logliks_2) {
    const size_t m = per_subject_logliks_1.size();
    if (per_subject_logliks_2.size() != m) {
        throw std::invalid_argument("vuong_test: unequal lengths");
    }
    if (m < 2) {
        throw std::invalid_argument("vuong_test: need at least two subjects");
    }
    ComparisonReport rep;
    double sum = 0.0;
    for (size_t i = 0; i < m; ++i) {
        sum += per_subject_logliks_2[i] - per_subject_logliks_1[i];
    }
    rep.mean_diff = sum / static_cast<double>(m);
    double ss = 0.0;
    for (size_t i = 0; i < m; ++i) {
        const double d =
            per_subject_logliks_2[i] - per_subject_logliks_1[i] - rep.mean_diff;
        ss += d * d;
    }
    rep.sd_diff = std::sqrt(ss / (static_cast<double>(m) - 1.0));
    const double half = 1.96 * rep.sd_diff / std::sqrt(static_cast<double>(m));
    rep.ci_lo = rep.mean_diff - half;
    rep.ci_hi = rep.mean_diff + half;
    if (rep.sd_diff > 0.0) {
        const double z = rep.mean_diff / (rep.sd_diff / std::sqrt(static_cast<double>(m)));
        rep.p_value = 2.0 * norm_cdf(-std::fabs(z));
    } else {
        rep.p_value = (rep.mean_diff == 0.0) ? 1.0 : 0.0;
    }
    if (rep.ci_lo > 0.0) {
        rep.decision = VuongDecision::model2;
    } else if (rep.ci_hi < 0.0) {
        rep.decision = VuongDecision::model1;
    } else {
        rep.decision = VuongDecision::indistinguishable;
    }
    return rep;
}

std::string to_string(VuongDecision decision) {
    switch (decision) {
        case VuongDecision::model1: return "model-1";
        case VuongDecision::model2: return "model-2";
        default: return "indistinguishable";
    }
}

} // namespace gsncop
