#ifndef GSNCOP_MODEL_EVAL_HPP
#define GSNCOP_MODEL_EVAL_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace gsncop {

double aic(double loglik, int n_params);

/// Composite-likelihood information criterion: -2 l_c + 2 tr(M D^{-1}),
/// where M is the variability and D the sensitivity matrix of the composite
/// score.  Reduces to AIC when M = D.  Singular D falls back to a
/// pseudo-inverse and sets the warning flag.
double claic(double comp_loglik, const Eigen::MatrixXd& m,
             const Eigen::MatrixXd& d, bool* pseudo_inverse_used = nullptr);

enum class VuongDecision { model1, model2, indistinguishable };

/// Normal test on per-subject log-density differences D_i = l2_i - l1_i.
/// A positive mean favors the second model.
struct ComparisonReport {
    double mean_diff = 0.0;   ///< average of the per-subject differences
    double sd_diff = 0.0;     ///< their sample standard deviation
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    double p_value = 1.0;
    VuongDecision decision = VuongDecision::indistinguishable;
};

ComparisonReport vuong_test(const std::vector<double>& per_subject_logliks_1,
                            const std::vector<double>& per_subject_logliks_2);

std::string to_string(VuongDecision decision);

} // namespace gsncop

#endif
