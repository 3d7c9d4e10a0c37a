#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "gsncop/copula.hpp"
#include "gsncop/dependence.hpp"
#include "gsncop/errors.hpp"
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

GsnParams design4() {
    Eigen::VectorXd mu(4);
    mu << 0.0, 0.0, 1.0, 1.0;
    Eigen::MatrixXd s(4, 4);
    s << 1.0, 0.6, 0.4, 0.2,
         0.6, 1.0, 0.2, 0.4,
         0.4, 0.2, 1.0, 0.2,
         0.2, 0.4, 0.2, 1.0;
    return GsnParams(0.5, mu, CorrelationMatrix(s));
}

Eigen::VectorXd uvec(std::initializer_list<double> vals) {
    Eigen::VectorXd u(static_cast<int>(vals.size()));
    int i = 0;
    for (double v : vals) u(i++) = v;
    return u;
}

} // namespace

TEST_CASE("copula cdf boundaries and closed forms") {
    GsnParams params = bivariate(0.5, 1.0, -0.5, 0.4);
    CHECK(copula_cdf(uvec({1.0, 1.0}), params, policy) == 1.0);
    CHECK(copula_cdf(uvec({0.0, 0.7}), params, policy) == 0.0);
    CHECK_THROWS_AS(copula_cdf(uvec({-0.1, 0.5}), params, policy),
                    std::invalid_argument);
    CHECK_THROWS_AS(copula_cdf(uvec({0.5, 1.2}), params, policy),
                    std::invalid_argument);

    // p = 1 is the Gaussian copula CDF
    GsnParams gauss = bivariate(1.0, 0.4, -1.0, 0.3);
    for (double u : {0.2, 0.5, 0.8}) {
        for (double v : {0.1, 0.6, 0.95}) {
            const double want = bvn_cdf(norm_quantile(u), norm_quantile(v), 0.3);
            CHECK(copula_cdf(uvec({u, v}), gauss, policy) ==
                  doctest::Approx(want).epsilon(1e-10));
        }
    }

    // symmetric median with mu = 0: closed-form orthant value
    GsnParams half = bivariate(0.5, 0.0, 0.0, 0.5);
    CHECK(copula_cdf(uvec({0.5, 0.5}), half, policy) ==
          doctest::Approx(0.25 + std::asin(0.5) / (2.0 * M_PI)).epsilon(1e-9));
}

TEST_CASE("copula uniform margins") {
    GsnParams params = bivariate(0.35, 0.8, -0.3, 0.6);
    for (double t = 0.1; t < 0.95; t += 0.1) {
        CHECK(copula_cdf(uvec({t, 1.0}), params, policy) ==
              doctest::Approx(t).epsilon(1e-8));
        CHECK(copula_cdf(uvec({1.0, t}), params, policy) ==
              doctest::Approx(t).epsilon(1e-8));
    }
    // and in three dimensions through the QMC path
    Eigen::MatrixXd s(3, 3);
    s << 1.0, 0.5, 0.3,
         0.5, 1.0, 0.2,
         0.3, 0.2, 1.0;
    Eigen::VectorXd mu(3);
    mu << 0.5, 0.0, -0.5;
    GsnParams p3(0.6, mu, CorrelationMatrix(s));
    for (double t : {0.25, 0.75}) {
        CHECK(copula_cdf(uvec({1.0, t, 1.0}), p3, policy) ==
              doctest::Approx(t).epsilon(1e-7));
    }
}

TEST_CASE("copula log density reductions") {
    // independence: p = 1, rho = 0 gives log density 0
    GsnParams indep = bivariate(1.0, 0.3, 0.7, 0.0);
    for (double u : {0.1, 0.5, 0.9}) {
        CHECK(std::fabs(copula_log_density(uvec({u, 1.0 - u}), indep, policy)) < 1e-12);
    }

    // p = 1 equals the Gaussian copula log density on a grid
    GsnParams gauss = bivariate(1.0, 0.5, -0.2, 0.77);
    double max_dev = 0.0;
    for (int i = 1; i <= 10; ++i) {
        for (int j = 1; j <= 10; ++j) {
            const double u = i / 11.0;
            const double v = j / 11.0;
            const double got = copula_log_density(uvec({u, v}), gauss, policy);
            const double want = testutil::gaussian_copula_logdensity(u, v, 0.77);
            max_dev = std::max(max_dev, std::fabs(got - want));
        }
    }
    CHECK(max_dev < 1e-8);
}

TEST_CASE("copula density vs finite differences of the cdf") {
    SeriesPolicy tight;
    tight.tail_mass_tol = 1e-14;
    tight.quantile_tol = 1e-12;
    GsnParams params = bivariate(0.5, 1.0, 1.0, 0.77);
    const double h = 1e-3;
    for (auto [u, v] : {std::pair{0.3, 0.7}, std::pair{0.5, 0.5}, std::pair{0.8, 0.25}}) {
        auto C = [&](double a, double b) {
            return copula_cdf(uvec({a, b}), params, tight);
        };
        const double fd = (C(u + h, v + h) - C(u + h, v - h) - C(u - h, v + h) +
                           C(u - h, v - h)) / (4.0 * h * h);
        const double density = std::exp(copula_log_density(uvec({u, v}), params, tight));
        CHECK(density == doctest::Approx(fd).epsilon(1e-4));
    }
}

TEST_CASE("copula sampling: margins, dependence, reproducibility") {
    const int n = 100000;
    GsnParams params = bivariate(0.5, 0.0, 0.0, 0.77);
    RandomStream stream(314, 1);
    Eigen::MatrixXd u = copula_sample(params, n, stream, policy);
    CHECK(u.minCoeff() > 0.0);
    CHECK(u.maxCoeff() < 1.0);

    // uniform margins at KS level 0.999
    const double crit = 1.9495 / std::sqrt(static_cast<double>(n));
    for (int j = 0; j < 2; ++j) {
        std::vector<double> col(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) col[static_cast<size_t>(i)] = u(i, j);
        CHECK(testutil::ks_uniform(col) < crit);
    }

    // Kendall tau of the sample near the closed form (2/pi) asin(rho)
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
    CHECK(std::fabs(est.mean - (2.0 / M_PI) * std::asin(0.77)) <= 3.0 * est.se);

    // p = 1 gives Gaussian copula samples: tau matches the same closed form
    GsnParams gauss = bivariate(1.0, 0.0, 0.0, 0.5);
    RandomStream s2(314, 2);
    Eigen::MatrixXd ug = copula_sample(gauss, 50000, s2, policy);
    std::vector<double> gx, gy;
    for (int i = 0; i < ug.rows(); ++i) {
        gx.push_back(ug(i, 0));
        gy.push_back(ug(i, 1));
    }
    const double tau_g = testutil::kendall_tau(gx, gy);
    CHECK(std::fabs(tau_g - (2.0 / M_PI) * std::asin(0.5)) < 0.02);

    // reproducibility
    RandomStream a(9, 4), b(9, 4);
    CHECK((copula_sample(params, 20, a, policy) -
           copula_sample(params, 20, b, policy)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sub copula closure") {
    GsnParams d4 = design4();
    GsnParams keep_all = sub_copula(d4, {0, 1, 2, 3});
    CHECK(keep_all.sigma().matrix().isApprox(d4.sigma().matrix(), 1e-14));

    // pairwise parameters read off directly
    GsnParams pair = sub_copula(d4, {1, 3});
    CHECK(pair.p() == 0.5);
    CHECK(pair.mu()(0) == 0.0);
    CHECK(pair.mu()(1) == 1.0);
    CHECK(pair.sigma()(0, 1) == doctest::Approx(0.4).epsilon(1e-14));

    // projected full-copula samples match direct sub-copula samples in tau
    const int n = 100000;
    RandomStream s1(77, 0), s2(77, 1);
    Eigen::MatrixXd full = copula_sample(d4, n, s1, policy);
    Eigen::MatrixXd direct = copula_sample(pair, n, s2, policy);
    std::vector<double> fx, fy, dx, dy;
    for (int i = 0; i < n; ++i) {
        fx.push_back(full(i, 1));
        fy.push_back(full(i, 3));
        dx.push_back(direct(i, 0));
        dy.push_back(direct(i, 1));
    }
    auto tf = testutil::batch_estimate(20, [&](int b) {
        std::vector<double> xb(fx.begin() + b * 5000, fx.begin() + (b + 1) * 5000);
        std::vector<double> yb(fy.begin() + b * 5000, fy.begin() + (b + 1) * 5000);
        return testutil::kendall_tau(xb, yb);
    });
    auto td = testutil::batch_estimate(20, [&](int b) {
        std::vector<double> xb(dx.begin() + b * 5000, dx.begin() + (b + 1) * 5000);
        std::vector<double> yb(dy.begin() + b * 5000, dy.begin() + (b + 1) * 5000);
        return testutil::kendall_tau(xb, yb);
    });
    CHECK(std::fabs(tf.mean - td.mean) <= 3.0 * std::hypot(tf.se, td.se));
}

TEST_CASE("exchangeability and its failure") {
    // exchangeable correlation and equal locations: permutation invariant
    Eigen::MatrixXd s(3, 3);
    s << 1.0, 0.4, 0.4,
         0.4, 1.0, 0.4,
         0.4, 0.4, 1.0;
    Eigen::VectorXd mu = Eigen::VectorXd::Constant(3, 0.7);
    GsnParams exch(0.5, mu, CorrelationMatrix(s));
    RandomStream stream(21, 0);
    double max_dev = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
        Eigen::VectorXd u(3);
        for (int j = 0; j < 3; ++j) u(j) = stream.uniform01();
        const double base = copula_log_density(u, exch, policy);
        std::vector<int> perm = {0, 1, 2};
        while (std::next_permutation(perm.begin(), perm.end())) {
            Eigen::VectorXd up(3);
            for (int j = 0; j < 3; ++j) up(j) = u(perm[static_cast<size_t>(j)]);
            max_dev = std::max(max_dev,
                               std::fabs(copula_log_density(up, exch, policy) - base));
        }
    }
    CHECK(max_dev < 1e-8);

    // unequal locations: a witness permutation breaks the symmetry
    Eigen::VectorXd mu2(3);
    mu2 << 0.2, 0.7, 1.2;
    GsnParams asym(0.5, mu2, CorrelationMatrix(s));
    Eigen::VectorXd u(3);
    u << 0.15, 0.5, 0.85;
    Eigen::VectorXd swapped(3);
    swapped << 0.85, 0.5, 0.15;
    const double dev = std::fabs(copula_log_density(u, asym, policy) -
                                 copula_log_density(swapped, asym, policy));
    CHECK(dev > 1e-4);
}

TEST_CASE("radial symmetry at mu = 0") {
    GsnParams sym = bivariate(0.4, 0.0, 0.0, 0.5);
    RandomStream stream(22, 0);
    double max_dev = 0.0;
    for (int rep = 0; rep < 40; ++rep) {
        Eigen::VectorXd u(2);
        u << stream.uniform01(), stream.uniform01();
        Eigen::VectorXd r = Eigen::VectorXd::Ones(2) - u;
        max_dev = std::max(max_dev, std::fabs(copula_log_density(u, sym, policy) -
                                              copula_log_density(r, sym, policy)));
    }
    CHECK(max_dev < 1e-8);
}

TEST_CASE("tail coefficients decrease toward zero") {
    GsnParams params = bivariate(0.5, 1.0, 1.0, 0.77);
    double prev_lower = 1.0, prev_upper = 1.0;
    for (double u : {1e-1, 1e-2, 1e-3, 1e-4}) {
        const double lo = tail_coefficient_estimate(params, u, TailSide::lower, policy);
        const double up = tail_coefficient_estimate(params, u, TailSide::upper, policy);
        CHECK(lo < prev_lower);
        CHECK(up < prev_upper);
        prev_lower = lo;
        prev_upper = up;
    }
}

TEST_CASE("clamping is counted") {
    GsnParams params = bivariate(0.5, 0.0, 0.0, 0.3);
    ClampStats stats;
    Eigen::VectorXd u(2);
    u << 1e-15, 0.4;
    copula_log_density(u, params, policy, &stats);
    CHECK(stats.clamped == 1);
}
