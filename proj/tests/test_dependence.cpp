#include <doctest.h>

#include <cmath>

#include "gsncop/copula.hpp"
#include "gsncop/dependence.hpp"
#include "gsncop/normal.hpp"
#include "test_util.hpp"

using namespace gsncop;

namespace {

SeriesPolicy policy;

GsnParams bivariate(double p, double mu1, double mu2, double rho) {
    Eigen::VectorXd mu(2);
    mu << mu1, mu2;
    Eigen::MatrixXd s(2, 2);
    s << 1.0, rho, rho, 1.0;
    return GsnParams(p, mu, CorrelationMatrix(s));
}

} // namespace

TEST_CASE("kendall tau closed form at mu = 0") {
    for (double p : {0.25, 0.5, 0.75}) {
        for (double rho : {-0.77, -0.3, 0.3, 0.77}) {
            const double tau = kendalls_tau(bivariate(p, 0.0, 0.0, rho), policy);
            CHECK(std::fabs(tau - (2.0 / M_PI) * std::asin(rho)) < 1e-4);
        }
    }
    CHECK(std::fabs(kendalls_tau(bivariate(0.5, 0.0, 0.0, 0.0), policy)) < 1e-10);
    // p = 1 keeps the Gaussian value
    CHECK(kendalls_tau(bivariate(1.0, 0.3, -0.4, 0.6), policy) ==
          doctest::Approx((2.0 / M_PI) * std::asin(0.6)).epsilon(1e-10));
    CHECK_THROWS_AS(kendalls_tau(GsnParams(0.5, Eigen::VectorXd::Zero(3),
                                           CorrelationMatrix(Eigen::MatrixXd::Identity(3, 3))),
                                 policy),
                    std::invalid_argument);
}

TEST_CASE("kendall tau evaluation routes agree") {
    for (auto params : {bivariate(0.5, 1.0, 1.0, 0.77), bivariate(0.4, -1.0, 0.5, -0.5),
                        bivariate(0.75, 0.3, 0.0, 0.25)}) {
        const double a = kendalls_tau(params, policy, TauRoute::orthant_series);
        const double b = kendalls_tau(params, policy, TauRoute::single_integral);
        CHECK(std::fabs(a - b) < 1e-6);
    }
}

TEST_CASE("kendall tau vs Monte Carlo concordance") {
    GsnParams params = bivariate(0.5, 1.0, 1.0, 0.77);
    const double tau = kendalls_tau(params, policy);
    RandomStream stream(500, 3);
    const int n = 100000;
    Eigen::MatrixXd u = copula_sample(params, n, stream, policy);
    std::vector<double> xs(static_cast<size_t>(n)), ys(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        xs[static_cast<size_t>(i)] = u(i, 0);
        ys[static_cast<size_t>(i)] = u(i, 1);
    }
    auto est = testutil::batch_estimate(20, [&](int b) {
        std::vector<double> xb(xs.begin() + b * 5000, xs.begin() + (b + 1) * 5000);
        std::vector<double> yb(ys.begin() + b * 5000, ys.begin() + (b + 1) * 5000);
        return testutil::kendall_tau(xb, yb);
    });
    CHECK(std::fabs(tau - est.mean) <= 3.0 * est.se);
}

TEST_CASE("spearman rho degenerate and limiting values") {
    // rho = 0 with mu = 0: the series collapses to quarter orthants
    CHECK(std::fabs(spearmans_rho(bivariate(0.5, 0.0, 0.0, 0.0), policy)) < 1e-10);
    // near the Gaussian limit: (6/pi) asin(rho/2)
    const double rho_near1 = spearmans_rho(bivariate(1.0 - 1e-9, 0.0, 0.0, 0.5), policy);
    CHECK(std::fabs(rho_near1 - (6.0 / M_PI) * std::asin(0.25)) < 1e-5);
}

TEST_CASE("spearman rho vs Monte Carlo ranks") {
    GsnParams params = bivariate(0.5, 1.0, 1.0, 0.77);
    const double rho_s = spearmans_rho(params, policy);
    RandomStream stream(501, 4);
    const int n = 100000;
    Eigen::MatrixXd u = copula_sample(params, n, stream, policy);
    std::vector<double> xs(static_cast<size_t>(n)), ys(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        xs[static_cast<size_t>(i)] = u(i, 0);
        ys[static_cast<size_t>(i)] = u(i, 1);
    }
    auto est = testutil::batch_estimate(20, [&](int b) {
        std::vector<double> xb(xs.begin() + b * 5000, xs.begin() + (b + 1) * 5000);
        std::vector<double> yb(ys.begin() + b * 5000, ys.begin() + (b + 1) * 5000);
        return testutil::spearman_rho(xb, yb);
    });
    CHECK(std::fabs(rho_s - est.mean) <= 3.0 * est.se);
}

TEST_CASE("shared-count rho variant is a distinct reference quantity") {
    // In the Gaussian limit the two constructions coincide.
    GsnParams gauss = bivariate(1.0 - 1e-9, 0.0, 0.0, 0.5);
    CHECK(std::fabs(spearmans_rho_shared_count(gauss, policy) -
                    spearmans_rho(gauss, policy)) < 1e-6);
    // Away from it they differ materially; the shared-count series is not a
    // rank correlation (here it exceeds one).
    GsnParams params = bivariate(0.5, 1.0, 1.0, 0.77);
    const double shared = spearmans_rho_shared_count(params, policy);
    const double exact = spearmans_rho(params, policy);
    CHECK(shared - exact > 0.2);
    CHECK(shared > 1.0);
    CHECK(std::fabs(exact) <= 1.0);
}

TEST_CASE("dependence measures are exchangeable and increasing in rho") {
    // swapping coordinates leaves both measures unchanged
    const double t3 = kendalls_tau(bivariate(0.4, -0.5, 1.0, 0.3), policy);
    const double t4 = kendalls_tau(bivariate(0.4, 1.0, -0.5, 0.3), policy);
    CHECK(t3 == doctest::Approx(t4).epsilon(1e-12));
    const double s3 = spearmans_rho(bivariate(0.4, -0.5, 1.0, 0.3), policy);
    const double s4 = spearmans_rho(bivariate(0.4, 1.0, -0.5, 0.3), policy);
    CHECK(s3 == doctest::Approx(s4).epsilon(1e-12));

    // monotone in rho for fixed (p, mu)
    double prev_tau = -2.0, prev_rho = -2.0;
    for (double rho : {-0.9, -0.5, 0.0, 0.5, 0.9}) {
        const double tau = kendalls_tau(bivariate(0.5, 0.7, 0.7, rho), policy);
        const double sr = spearmans_rho(bivariate(0.5, 0.7, 0.7, rho), policy);
        CHECK(tau > prev_tau);
        CHECK(sr > prev_rho);
        prev_tau = tau;
        prev_rho = sr;
    }
}

TEST_CASE("series truncation is stable under longer tails") {
    // the looser policy forces exactly ten more terms per index
    const double p = 0.5;
    SeriesPolicy longer = policy;
    longer.tail_mass_tol = policy.tail_mass_tol * std::pow(1.0 - p, 10);
    GsnParams params = bivariate(p, 1.0, 0.5, 0.6);
    REQUIRE(series_length(p, longer) == series_length(p, policy) + 10);
    CHECK(std::fabs(kendalls_tau(params, policy) - kendalls_tau(params, longer)) <
          10.0 * policy.tail_mass_tol);
    CHECK(std::fabs(spearmans_rho(params, policy) - spearmans_rho(params, longer)) <
          10.0 * policy.tail_mass_tol);
}

TEST_CASE("regression curve") {
    // independence: flat at one half
    GsnParams indep = bivariate(1.0, 0.0, 0.0, 0.0);
    for (double v : {0.2, 0.5, 0.8}) {
        CHECK(regression_curve(v, indep, policy) == doctest::Approx(0.5).epsilon(1e-10));
    }

    // Gaussian case against the analytic conditional mean and MC binning
    GsnParams gauss = bivariate(1.0, 0.0, 0.0, 0.77);
    RandomStream stream(502, 5);
    const int n = 400000;
    Eigen::MatrixXd u = copula_sample(gauss, n, stream, policy);
    for (double v0 : {0.3, 0.6}) {
        const double curve = regression_curve(v0, gauss, policy);
        const double analytic =
            norm_cdf(0.77 * norm_quantile(v0) / std::sqrt(2.0 - 0.77 * 0.77));
        CHECK(curve == doctest::Approx(analytic).epsilon(1e-7));
        double sum = 0.0, sum2 = 0.0;
        int count = 0;
        for (int i = 0; i < n; ++i) {
            if (std::fabs(u(i, 1) - v0) < 0.005) {
                sum += u(i, 0);
                sum2 += u(i, 0) * u(i, 0);
                ++count;
            }
        }
        REQUIRE(count > 100);
        const double mean = sum / count;
        const double se = std::sqrt((sum2 / count - mean * mean) / count);
        CHECK(std::fabs(curve - mean) <= 3.0 * se + 1e-3);
    }

    // values stay inside the unit interval; doubled nodes agree
    GsnParams skewed = bivariate(0.5, 1.0, 1.0, 0.77);
    for (double v = 0.05; v < 1.0; v += 0.1) {
        const double e1 = regression_curve(v, skewed, policy, 128);
        const double e2 = regression_curve(v, skewed, policy, 256);
        CHECK(e1 > 0.0);
        CHECK(e1 < 1.0);
        CHECK(std::fabs(e1 - e2) < 1e-6);
    }
}

TEST_CASE("tail coefficient estimates") {
    // independence copula: lower estimate equals u
    GsnParams indep = bivariate(1.0, 0.0, 0.0, 0.0);
    for (double u : {0.1, 0.01}) {
        CHECK(tail_coefficient_estimate(indep, u, TailSide::lower, policy) ==
              doctest::Approx(u).epsilon(1e-8));
    }
    // near-comonotone Gaussian: estimate close to its upper bound one
    GsnParams como = bivariate(1.0, 0.0, 0.0, 0.9999);
    CHECK(tail_coefficient_estimate(como, 0.1, TailSide::lower, policy) > 0.9);
    CHECK_THROWS_AS(tail_coefficient_estimate(indep, 0.7, TailSide::lower, policy),
                    std::invalid_argument);

    // strictly decreasing sequences for a second parameter set
    GsnParams params = bivariate(0.25, -1.0, -1.0, 0.5);
    double prev_lo = 1.0, prev_up = 1.0;
    for (double u : {1e-1, 1e-2, 1e-3, 1e-4}) {
        const double lo = tail_coefficient_estimate(params, u, TailSide::lower, policy);
        const double up = tail_coefficient_estimate(params, u, TailSide::upper, policy);
        CHECK(lo < prev_lo);
        CHECK(up < prev_up);
        prev_lo = lo;
        prev_up = up;
    }
}

TEST_CASE("dependence summary report") {
    GsnParams params = bivariate(0.5, 1.0, 1.0, 0.77);
    DependenceReport rep = dependence_summary(params, policy);
    CHECK(std::fabs(rep.tau) <= 1.0);
    CHECK(std::fabs(rep.rho_s) <= 1.0);
    CHECK(rep.tau_terms == series_length(0.5, policy));
    CHECK(rep.tau_terms <= policy.max_terms);
    CHECK(rep.rho_terms <= policy.max_terms);
}
