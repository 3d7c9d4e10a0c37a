#ifndef GSNCOP_GLM_HPP
#define GSNCOP_GLM_HPP

#include <Eigen/Dense>

#include "gsncop/dataset.hpp"

namespace gsncop {

enum class MarginalFamily { gamma_log, gaussian_identity };

/// Independence GLM for the margins.  beta includes the intercept as its
/// first entry; dispersion is the gamma shape or the gaussian variance.
struct MarginalModel {
    MarginalFamily family = MarginalFamily::gaussian_identity;
    Eigen::VectorXd beta;
    double dispersion = 1.0;

    int n_params() const { return static_cast<int>(beta.size()) + 1; }
    double linear_predictor(const Eigen::VectorXd& x) const;
    double mean(const Eigen::VectorXd& x) const;
    double cdf(double y, const Eigen::VectorXd& x) const;
    double logpdf(double y, const Eigen::VectorXd& x) const;
    double quantile(double u, const Eigen::VectorXd& x) const;
};

/// Independence maximum likelihood for the marginal GLM.  Gamma margins use
/// the log link (Fisher scoring for beta, Newton for the shape); gaussian
/// margins are ordinary least squares with the ML variance.
MarginalModel fit_marginal_glm(const LongitudinalDataset& data,
                               MarginalFamily family);

/// Per-subject independence log-likelihood at an arbitrary parameter vector
/// packed as [beta..., dispersion]; used by sandwich estimators.
Eigen::VectorXd marginal_per_subject_loglik(const LongitudinalDataset& data,
                                            MarginalFamily family,
                                            const Eigen::VectorXd& packed);

Eigen::VectorXd pack_marginal(const MarginalModel& model);
MarginalModel unpack_marginal(MarginalFamily family, const Eigen::VectorXd& packed);

} // namespace gsncop

#endif
