#include "gsncop/replication.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <thread>

#include "gsncop/copula.hpp"
#include "gsncop/copula_fit.hpp"
#include "gsncop/glm.hpp"
#include "gsncop/ordinal.hpp"

namespace gsncop {

void parallel_for(int n, int threads, const std::function<void(int)>& body) {
    threads = std::max(1, threads);
    if (threads == 1 || n <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    const int workers = std::min(threads, n);
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
        });
    }
    for (std::thread& t : pool) t.join();
}

namespace {

SummaryTable summarize(const std::vector<std::string>& names,
                       const Eigen::VectorXd& truth,
                       const std::vector<Eigen::VectorXd>& estimates,
                       const std::vector<Eigen::VectorXd>& ses, int m) {
    SummaryTable table;
    table.sample_size = m;
    const int q = static_cast<int>(truth.size());
    std::vector<Eigen::VectorXd> est, se;
    for (size_t r = 0; r < estimates.size(); ++r) {
        if (estimates[r].size() == q && estimates[r].allFinite()) {
            est.push_back(estimates[r]);
            se.push_back(ses[r]);
        } else {
            ++table.failures;
        }
    }
    const int reps = static_cast<int>(est.size());
    table.replications = reps;
    for (int j = 0; j < q; ++j) {
        SummaryRow row;
        row.name = names[static_cast<size_t>(j)];
        row.truth = truth(j);
        double mean = 0.0, mse = 0.0, se_mean = 0.0;
        for (int r = 0; r < reps; ++r) {
            mean += est[static_cast<size_t>(r)](j);
            const double d = est[static_cast<size_t>(r)](j) - truth(j);
            mse += d * d;
            se_mean += se[static_cast<size_t>(r)].size() == q
                           ? se[static_cast<size_t>(r)](j)
                           : 0.0;
        }
        mean /= reps;
        row.mean = mean;
        row.bias = mean - truth(j);
        row.rmse = std::sqrt(mse / reps);
        row.se = se_mean / reps;
        double var = 0.0;
        for (int r = 0; r < reps; ++r) {
            const double d = est[static_cast<size_t>(r)](j) - mean;
            var += d * d;
        }
        row.sd = reps > 1 ? std::sqrt(var / (reps - 1.0)) : 0.0;
        table.rows.push_back(row);
    }
    return table;
}

} // namespace

SummaryTable replicate_mgsn(const GsnParams& truth, int m, int reps,
                            std::uint64_t seed, const SeriesPolicy& policy,
                            int threads) {
    const int q = n_free_params(truth.dim());
    std::vector<Eigen::VectorXd> estimates(static_cast<size_t>(reps));
    std::vector<Eigen::VectorXd> ses(static_cast<size_t>(reps));
    parallel_for(reps, threads, [&](int r) {
        RandomStream stream(seed, static_cast<std::uint64_t>(r));
        Eigen::MatrixXd x = mgsn_sample(truth, m, stream);
        try {
            UnrestrictedFit fit = fit_mgsn_mle(x, policy);
            MgsnLoglik objective(x, policy);
            ObservedInfo info = observed_info(objective, pack_params(fit.params));
            estimates[static_cast<size_t>(r)] = pack_params(fit.params);
            ses[static_cast<size_t>(r)] = info.se;
        } catch (...) {
            estimates[static_cast<size_t>(r)] = Eigen::VectorXd();
            ses[static_cast<size_t>(r)] = Eigen::VectorXd::Zero(q);
        }
    });
    return summarize(param_names(truth.dim()), pack_params(truth), estimates,
                     ses, m);
}

SummaryTable replicate_gsn_copula(const GsnParams& truth, int m, int reps,
                                  std::uint64_t seed, const SeriesPolicy& policy,
                                  int threads) {
    const int q = n_free_params(truth.dim());
    std::vector<Eigen::VectorXd> estimates(static_cast<size_t>(reps));
    std::vector<Eigen::VectorXd> ses(static_cast<size_t>(reps));
    parallel_for(reps, threads, [&](int r) {
        RandomStream stream(seed, static_cast<std::uint64_t>(r));
        Eigen::MatrixXd u = copula_sample(truth, m, stream, policy);
        try {
            UnrestrictedFit fit = fit_gsn_copula_mle(u, policy);
            CopulaLoglik objective(u, policy);
            ObservedInfo info = observed_info(objective, pack_params(fit.params));
            estimates[static_cast<size_t>(r)] = pack_params(fit.params);
            ses[static_cast<size_t>(r)] = info.se;
        } catch (...) {
            estimates[static_cast<size_t>(r)] = Eigen::VectorXd();
            ses[static_cast<size_t>(r)] = Eigen::VectorXd::Zero(q);
        }
    });
    return summarize(param_names(truth.dim()), pack_params(truth), estimates,
                     ses, m);
}

SummaryTable replicate_gamma_glm(const GammaGlmDesign& design, int m, int reps,
                                 std::uint64_t seed, const SeriesPolicy& policy,
                                 int threads) {
    std::vector<std::string> names = {"beta0", "beta1", "beta2", "beta3",
                                      "kappa", "p",     "xi",    "mu_bar"};
    Eigen::VectorXd truth(8);
    truth << design.beta(0), design.beta(1), design.beta(2), design.beta(3),
        design.kappa, design.p, design.xi, design.mu_bar;
    std::vector<Eigen::VectorXd> estimates(static_cast<size_t>(reps));
    std::vector<Eigen::VectorXd> ses(static_cast<size_t>(reps));
    parallel_for(reps, threads, [&](int r) {
        RandomStream stream(seed, static_cast<std::uint64_t>(r));
        LongitudinalDataset data = simulate_gamma_glm(design, m, stream, policy);
        try {
            MarginalModel marginal = fit_marginal_glm(data, MarginalFamily::gamma_log);
            PitResult pit = pit_transform(data, marginal);
            CopulaStageFit stage2 =
                fit_copula_stage(pit, data, design.kind, policy, false);
            SandwichResult sandwich =
                godambe_sandwich(data, marginal, stage2, policy);
            Eigen::VectorXd est(8);
            est << marginal.beta(0), marginal.beta(1), marginal.beta(2),
                marginal.beta(3), marginal.dispersion, stage2.p,
                stage2.structure.xi, stage2.structure.mu_bar;
            estimates[static_cast<size_t>(r)] = est;
            ses[static_cast<size_t>(r)] = sandwich.se;
        } catch (...) {
            estimates[static_cast<size_t>(r)] = Eigen::VectorXd();
            ses[static_cast<size_t>(r)] = Eigen::VectorXd::Zero(8);
        }
    });
    return summarize(names, truth, estimates, ses, m);
}

SummaryTable replicate_ordinal(const OrdinalProbitDesign& design, int m,
                               int reps, std::uint64_t seed,
                               const SeriesPolicy& policy, int threads) {
    std::vector<std::string> names = {"beta1",  "beta2",  "beta3", "gamma1",
                                      "gamma2", "gamma3", "p",     "xi",
                                      "mu_bar"};
    Eigen::VectorXd truth(9);
    truth << design.beta(0), design.beta(1), design.beta(2),
        design.thresholds(0), design.thresholds(1), design.thresholds(2),
        design.p, design.xi, design.mu_bar;
    std::vector<Eigen::VectorXd> estimates(static_cast<size_t>(reps));
    std::vector<Eigen::VectorXd> ses(static_cast<size_t>(reps));
    parallel_for(reps, threads, [&](int r) {
        RandomStream stream(seed, static_cast<std::uint64_t>(r));
        LongitudinalDataset data =
            simulate_ordinal_probit(design, m, stream, policy);
        try {
            OrdinalModel marginal = ordinal_marginal_fit(data, design.n_categories);
            CmlFit stage2 = fit_cml_stage(data, marginal, design.kind, policy, false);
            SandwichResult sandwich = cml_sandwich(data, marginal, stage2, policy);
            Eigen::VectorXd est(9);
            est << marginal.beta(0), marginal.beta(1), marginal.beta(2),
                marginal.thresholds(0), marginal.thresholds(1),
                marginal.thresholds(2), stage2.p, stage2.structure.xi,
                stage2.structure.mu_bar;
            estimates[static_cast<size_t>(r)] = est;
            ses[static_cast<size_t>(r)] = sandwich.se;
        } catch (...) {
            estimates[static_cast<size_t>(r)] = Eigen::VectorXd();
            ses[static_cast<size_t>(r)] = Eigen::VectorXd::Zero(9);
        }
    });
    return summarize(names, truth, estimates, ses, m);
}

} // namespace gsncop
