#include <doctest.h>

#include <cmath>
#include <limits>

#include "gsncop/errors.hpp"
#include "gsncop/linalg.hpp"
#include "gsncop/mvn.hpp"
#include "gsncop/normal.hpp"
#include "gsncop/quadrature.hpp"
#include "gsncop/rng.hpp"
#include "test_util.hpp"

using namespace gsncop;

namespace {
const double kInf = std::numeric_limits<double>::infinity();

// quadrature oracle for the bivariate CDF (independent of the production path)
double bvn_oracle(double x, double y, double rho) {
    const double s = std::sqrt(1.0 - rho * rho);
    auto f = [&](double t) { return norm_cdf((y - rho * t) / s) * norm_pdf(t); };
    return gauss_legendre_integrate(f, -9.0, std::min(x, 9.0), 256) +
           (x > 9.0 ? norm_cdf(x) - norm_cdf(9.0) : 0.0);
}
} // namespace

TEST_CASE("standard normal cdf") {
    CHECK(norm_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(std::fabs(norm_cdf(40.0) - 1.0) <= 1e-15);
    CHECK(norm_cdf(-40.0) >= 0.0);
    CHECK(norm_cdf(kInf) == 1.0);
    CHECK(norm_cdf(-kInf) == 0.0);
    // invert the high-precision quantile
    CHECK(std::fabs(norm_cdf(norm_quantile(0.975)) - 0.975) < 1e-14);
    CHECK(std::fabs(norm_cdf(1.959964) - 0.975) < 1e-7);
    // monotone on a grid
    double prev = -1.0;
    for (double x = -10.0; x <= 10.0; x += 0.25) {
        const double c = norm_cdf(x);
        CHECK(c >= prev);
        prev = c;
    }
}

TEST_CASE("standard normal quantile round trip") {
    for (double u = 1e-10; u < 1.0; u = (u < 0.5 ? u * 3.1 : 1.0 - (1.0 - u) / 3.1)) {
        const double x = norm_quantile(u);
        CHECK(std::fabs(norm_cdf(x) - u) < 1e-12 * std::max(1.0, 1.0 / u));
    }
    CHECK(norm_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(norm_quantile(0.0) == -kInf);
    CHECK(norm_quantile(1.0) == kInf);
}

TEST_CASE("bivariate normal cdf closed forms") {
    CHECK(bvn_cdf(0.0, 0.0, 0.0) == doctest::Approx(0.25).epsilon(1e-14));
    const double expected = 0.25 + std::asin(0.5) / (2.0 * M_PI);
    CHECK(bvn_cdf(0.0, 0.0, 0.5) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(bvn_cdf(0.0, 0.0, 0.5) == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
    // margins at infinity
    CHECK(bvn_cdf(kInf, 0.7, 0.4) == doctest::Approx(norm_cdf(0.7)).epsilon(1e-15));
    CHECK(bvn_cdf(-1.2, kInf, -0.8) == doctest::Approx(norm_cdf(-1.2)).epsilon(1e-15));
    CHECK(bvn_cdf(-kInf, 0.3, 0.2) == 0.0);
    CHECK_THROWS_AS(bvn_cdf(0.0, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(bvn_cdf(0.0, 0.0, -1.2), std::invalid_argument);
}

TEST_CASE("bivariate normal cdf vs quadrature oracle") {
    const double xs[] = {-2.5, -1.0, -0.3, 0.0, 0.7, 1.8, 3.0};
    const double rhos[] = {-0.97, -0.77, -0.5, -0.1, 0.0, 0.3, 0.77, 0.93, 0.99};
    for (double rho : rhos) {
        for (double x : xs) {
            for (double y : xs) {
                const double got = bvn_cdf(x, y, rho);
                const double want = bvn_oracle(x, y, rho);
                CHECK(std::fabs(got - want) < 1e-13);
                // symmetry in the arguments
                CHECK(got == doctest::Approx(bvn_cdf(y, x, rho)).epsilon(1e-14));
            }
        }
    }
}

TEST_CASE("bivariate normal cdf monotone in each argument") {
    for (double rho : {-0.8, 0.0, 0.6}) {
        double prev = -1.0;
        for (double x = -4.0; x <= 4.0; x += 0.5) {
            const double c = bvn_cdf(x, 0.4, rho);
            CHECK(c >= prev - 1e-15);
            prev = c;
        }
        prev = -1.0;
        for (double y = -4.0; y <= 4.0; y += 0.5) {
            const double c = bvn_cdf(-0.3, y, rho);
            CHECK(c >= prev - 1e-15);
            prev = c;
        }
    }
}

TEST_CASE("mvn cdf low dimensional reductions") {
    SeriesPolicy policy;
    {
        Eigen::VectorXd upper(1), mean(1);
        upper << 1.3;
        mean << 0.5;
        Eigen::MatrixXd cov(1, 1);
        cov << 4.0;
        QmcEstimate e = mvn_cdf(upper, mean, cov, policy);
        CHECK(e.error_estimate == 0.0);
        CHECK(e.value == doctest::Approx(norm_cdf((1.3 - 0.5) / 2.0)).epsilon(1e-14));
    }
    {
        Eigen::VectorXd upper = Eigen::VectorXd::Zero(3);
        Eigen::VectorXd mean = Eigen::VectorXd::Zero(3);
        Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(3, 3);
        QmcEstimate e = mvn_cdf(upper, mean, cov, policy);
        CHECK(std::fabs(e.value - 0.125) <= 3.0 * std::max(e.error_estimate, 1e-7));
        CHECK(e.error_estimate <= policy.mvn_abs_tol);
    }
}

TEST_CASE("mvn cdf diagonal covariance equals product of margins") {
    SeriesPolicy policy;
    Eigen::VectorXd upper(4), mean(4);
    upper << 0.3, -0.2, 1.0, 0.5;
    mean << 0.0, 0.1, -0.4, 0.0;
    Eigen::VectorXd sd(4);
    sd << 1.0, 2.0, 0.5, 1.5;
    Eigen::MatrixXd cov = sd.array().square().matrix().asDiagonal();
    double prod = 1.0;
    for (int i = 0; i < 4; ++i) prod *= norm_cdf((upper(i) - mean(i)) / sd(i));
    QmcEstimate e = mvn_cdf(upper, mean, cov, policy);
    CHECK(std::fabs(e.value - prod) < 1e-10 + 3.0 * e.error_estimate);
}

TEST_CASE("mvn cdf d=4 orthant vs Monte Carlo oracle") {
    SeriesPolicy policy;
    Eigen::MatrixXd sigma(4, 4);
    sigma << 1.0, 0.6, 0.4, 0.2,
             0.6, 1.0, 0.2, 0.4,
             0.4, 0.2, 1.0, 0.2,
             0.2, 0.4, 0.2, 1.0;
    Eigen::VectorXd zero = Eigen::VectorXd::Zero(4);
    QmcEstimate e = mvn_cdf(zero, zero, sigma, policy);

    Eigen::MatrixXd L = cholesky_lower(sigma);
    RandomStream stream(20240810, 1);
    const int n = 1000000;
    int hits = 0;
    Eigen::VectorXd g(4);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < 4; ++j) g(j) = stream.normal();
        Eigen::VectorXd z = L * g;
        if ((z.array() <= 0.0).all()) ++hits;
    }
    const double freq = static_cast<double>(hits) / n;
    const double se_mc = std::sqrt(freq * (1.0 - freq) / n);
    CHECK(std::fabs(e.value - freq) <= 3.0 * (se_mc + e.error_estimate));
}

TEST_CASE("mvn cdf infinite sentinels and errors") {
    SeriesPolicy policy;
    Eigen::VectorXd upper(3), mean = Eigen::VectorXd::Zero(3);
    Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(3, 3);
    cov(0, 1) = cov(1, 0) = 0.5;
    upper << kInf, 0.0, 0.0;
    QmcEstimate e = mvn_cdf(upper, mean, cov, policy);
    CHECK(e.value == doctest::Approx(bvn_cdf(0.0, 0.0, 0.0)).epsilon(1e-12));
    upper << -kInf, 0.0, 0.0;
    CHECK(mvn_cdf(upper, mean, cov, policy).value == 0.0);

    Eigen::MatrixXd bad = Eigen::MatrixXd::Ones(3, 3);
    upper << 0.0, 0.0, 0.0;
    CHECK_THROWS_AS(mvn_cdf(upper, mean, bad, policy), FactorizationError);
}

TEST_CASE("cholesky wrapper") {
    Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(3, 3);
    CHECK(cholesky_lower(eye).isApprox(eye, 1e-14));

    Eigen::MatrixXd m(2, 2);
    m << 1.0, 0.6, 0.6, 1.0;
    Eigen::MatrixXd l = cholesky_lower(m);
    CHECK(l(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(l(1, 0) == doctest::Approx(0.6).epsilon(1e-14));
    CHECK(l(1, 1) == doctest::Approx(0.8).epsilon(1e-14));
    CHECK((l * l.transpose()).isApprox(m, 1e-12));

    Eigen::MatrixXd singular(2, 2);
    singular << 1.0, 1.0, 1.0, 1.0;
    CHECK_THROWS_AS(cholesky_lower(singular), FactorizationError);
}

TEST_CASE("gauss legendre quadrature") {
    auto one = [](double) { return 1.0; };
    CHECK(gauss_legendre_integrate(one, 0.0, 1.0, 8) == doctest::Approx(1.0).epsilon(1e-15));
    auto cube = [](double x) { return x * x * x; };
    CHECK(gauss_legendre_integrate(cube, 0.0, 1.0, 2) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(std::fabs(gauss_legendre_integrate([](double x) { return norm_pdf(x); },
                                             -8.0, 8.0, 64) - 1.0) < 1e-12);
    CHECK_THROWS_AS(gauss_legendre_integrate(one, 1.0, 0.0, 4), std::invalid_argument);
}

TEST_CASE("random stream determinism and independence") {
    RandomStream a(42, 3), b(42, 3), c(42, 4);
    for (int i = 0; i < 1000; ++i) {
        CHECK(a.uniform01() == b.uniform01());
    }
    RandomStream a2(42, 3);
    std::vector<double> xs, ys;
    for (int i = 0; i < 100000; ++i) {
        xs.push_back(a2.uniform01());
        ys.push_back(c.uniform01());
    }
    CHECK(std::fabs(testutil::pearson(xs, ys)) < 0.01);
}

TEST_CASE("random stream geometric counts") {
    RandomStream s(7, 0);
    CHECK(s.geometric(1.0) == 1);
    double mean = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) mean += static_cast<double>(s.geometric(0.4));
    mean /= n;
    CHECK(mean == doctest::Approx(2.5).epsilon(0.02));
    CHECK_THROWS_AS(s.geometric(0.0), std::invalid_argument);
}
