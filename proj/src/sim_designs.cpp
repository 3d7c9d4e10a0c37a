#include "gsncop/sim_designs.hpp"

#include <cmath>

#include "gsncop/copula.hpp"
#include "gsncop/glm.hpp"
#include "gsncop/normal.hpp"
#include "gsncop/special.hpp"

namespace gsncop {

GsnParams standard_design_params() {
    Eigen::VectorXd mu(4);
    mu << 0.0, 0.0, 1.0, 1.0;
    Eigen::MatrixXd sigma(4, 4);
    sigma << 1.0, 0.6, 0.4, 0.2,
             0.6, 1.0, 0.2, 0.4,
             0.4, 0.2, 1.0, 0.2,
             0.2, 0.4, 0.2, 1.0;
    return GsnParams(0.5, mu, CorrelationMatrix(sigma));
}

GsnParams longitudinal_copula_params(double p, double mu_bar, double xi,
                                     CorrKind kind,
                                     const std::vector<double>& times) {
    const int d = static_cast<int>(times.size());
    return GsnParams(p, Eigen::VectorXd::Constant(d, mu_bar),
                     CorrelationMatrix(build_correlation(kind, xi, times)));
}

namespace {

std::vector<double> visit_times(int n_times) {
    std::vector<double> t(static_cast<size_t>(n_times));
    for (int j = 0; j < n_times; ++j) t[static_cast<size_t>(j)] = j + 1.0;
    return t;
}

// covariate block shared by both longitudinal designs:
// x1 ~ Bernoulli(1/2), x2 ~ N(5, 4), t = visit time
Eigen::MatrixXd draw_covariates(const std::vector<double>& times,
                                RandomStream& stream) {
    const int n = static_cast<int>(times.size());
    Eigen::MatrixXd x(n, 3);
    const double x1 = stream.uniform01() < 0.5 ? 1.0 : 0.0;
    const double x2 = 5.0 + 2.0 * stream.normal();
    for (int j = 0; j < n; ++j) {
        x(j, 0) = x1;
        x(j, 1) = x2;
        x(j, 2) = times[static_cast<size_t>(j)];
    }
    return x;
}

} // namespace

LongitudinalDataset simulate_gamma_glm(const GammaGlmDesign& design, int m,
                                       RandomStream& stream,
                                       const SeriesPolicy& policy) {
    const std::vector<double> times = visit_times(design.n_times);
    GsnParams copula = longitudinal_copula_params(design.p, design.mu_bar,
                                                  design.xi, design.kind, times);
    LongitudinalDataset data;
    data.covariate_names = {"x1", "x2", "t"};
    data.clusters.reserve(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) {
        Cluster c;
        c.id = "s" + std::to_string(i + 1);
        c.times = times;
        c.x = draw_covariates(times, stream);
        Eigen::MatrixXd u = copula_sample(copula, 1, stream, policy);
        c.y.resize(design.n_times);
        for (int j = 0; j < design.n_times; ++j) {
            const double eta = design.beta(0) + design.beta(1) * c.x(j, 0) +
                               design.beta(2) * c.x(j, 1) +
                               design.beta(3) * c.x(j, 2);
            const double mean = std::exp(eta);
            c.y(j) = inv_reg_inc_gamma_p(design.kappa, u(0, j)) * mean / design.kappa;
        }
        data.clusters.push_back(std::move(c));
    }
    return data;
}

LongitudinalDataset simulate_ordinal_probit(const OrdinalProbitDesign& design,
                                            int m, RandomStream& stream,
                                            const SeriesPolicy& policy) {
    const std::vector<double> times = visit_times(design.n_times);
    GsnParams copula = longitudinal_copula_params(design.p, design.mu_bar,
                                                  design.xi, design.kind, times);
    const int K = design.n_categories;
    LongitudinalDataset data;
    data.covariate_names = {"x1", "x2", "t"};
    data.clusters.reserve(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) {
        Cluster c;
        c.id = "s" + std::to_string(i + 1);
        c.times = times;
        c.x = draw_covariates(times, stream);
        Eigen::MatrixXd u = copula_sample(copula, 1, stream, policy);
        c.y.resize(design.n_times);
        for (int j = 0; j < design.n_times; ++j) {
            const double z = design.beta(0) * c.x(j, 0) +
                             design.beta(1) * c.x(j, 1) +
                             design.beta(2) * c.x(j, 2) + norm_quantile(u(0, j));
            int y = 1;
            while (y < K && z >= design.thresholds(y - 1)) ++y;
            c.y(j) = y;
        }
        data.clusters.push_back(std::move(c));
    }
    return data;
}

} // namespace gsncop
