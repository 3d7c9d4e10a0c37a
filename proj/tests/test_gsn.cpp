#include <doctest.h>

#include <cmath>
#include <limits>

#include "gsncop/copula.hpp"
#include "gsncop/errors.hpp"
#include "gsncop/gsn.hpp"
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

} // namespace

TEST_CASE("series length rule") {
    CHECK(series_length(0.5, policy) == 40);
    CHECK(series_length(1.0, policy) == 1);
    CHECK(series_length(0.99, policy) == 7);
    // the defining invariant, across p values
    for (double p : {0.05, 0.25, 0.5, 0.75, 0.9, 0.99}) {
        const int k = series_length(p, policy);
        CHECK(std::pow(1.0 - p, k) <= policy.tail_mass_tol);
        CHECK(k <= policy.max_terms);
        // truncated mass covers all but the allowed tail
        const std::vector<double> w = geometric_weights(p, k);
        double mass = 0.0;
        for (double v : w) mass += v;
        CHECK(mass >= 1.0 - policy.tail_mass_tol);
    }
    SeriesPolicy tight;
    tight.max_terms = 10;
    CHECK(series_length(0.001, tight) == 10);
}

TEST_CASE("univariate pdf against brute series and cdf differences") {
    // p = 1: plain normal
    Gsn1 normal_case(0.3, 1.0, 1.0, policy);
    CHECK(normal_case.pdf(0.8) == doctest::Approx(norm_pdf(0.5)).epsilon(1e-14));
    CHECK(normal_case.cdf(0.8) == doctest::Approx(norm_cdf(0.5)).epsilon(1e-14));

    // independent long-series oracle at x = 0, mu = 0, p = 0.5
    Gsn1 g(0.0, 1.0, 0.5, policy);
    double oracle = 0.0;
    for (int k = 1; k <= 200; ++k) {
        oracle += 0.5 * std::pow(0.5, k - 1) * norm_pdf(0.0) / std::sqrt(k);
    }
    CHECK(g.pdf(0.0) == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(std::exp(g.logpdf(0.0)) == doctest::Approx(oracle).epsilon(1e-12));

    // numeric differentiation of the cdf reproduces the density
    Gsn1 h(1.0, 1.0, 0.4, policy);
    for (double x : {-1.0, 0.5, 2.0, 5.0}) {
        const double fd = (h.cdf(x + 5e-6) - h.cdf(x - 5e-6)) / 1e-5;
        CHECK(h.pdf(x) == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("univariate cdf symmetry and Monte Carlo oracle") {
    CHECK(gsn1_cdf(0.0, 0.0, 1.0, 0.3, policy) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(gsn1_cdf(2.0, 0.0, 1.0, 1.0, policy) ==
          doctest::Approx(norm_cdf(2.0)).epsilon(1e-14));

    // MC oracle at (x, mu, sigma, p) = (2, 1, 1, 0.5)
    RandomStream stream(99, 5);
    const int n = 1000000;
    int hits = 0;
    for (int i = 0; i < n; ++i) {
        const double count = static_cast<double>(stream.geometric(0.5));
        const double x = count * 1.0 + std::sqrt(count) * stream.normal();
        if (x <= 2.0) ++hits;
    }
    const double freq = static_cast<double>(hits) / n;
    const double se = std::sqrt(freq * (1.0 - freq) / n);
    CHECK(std::fabs(gsn1_cdf(2.0, 1.0, 1.0, 0.5, policy) - freq) <= 3.0 * se);
}

TEST_CASE("univariate quantile") {
    CHECK(gsn1_quantile(0.5, 0.0, 1.0, 0.35, policy) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(gsn1_quantile(0.8, 0.7, 2.0, 1.0, policy) ==
          doctest::Approx(0.7 + 2.0 * norm_quantile(0.8)).epsilon(1e-12));
    CHECK_THROWS_AS(gsn1_quantile(0.0, 0.0, 1.0, 0.5, policy), std::invalid_argument);
    CHECK_THROWS_AS(gsn1_quantile(1.5, 0.0, 1.0, 0.5, policy), std::invalid_argument);

    for (double p : {0.25, 0.5, 0.9}) {
        for (double mu : {-1.0, 0.0, 1.0}) {
            Gsn1 g(mu, 1.0, p, policy);
            double prev = -std::numeric_limits<double>::infinity();
            for (double u = 0.01; u < 1.0; u += 0.014) {
                const double x = g.quantile(u);
                CHECK(std::fabs(g.cdf(x) - u) <= policy.quantile_tol);
                CHECK(x > prev);  // strictly increasing
                prev = x;
            }
        }
    }
    // extreme targets terminate within the tolerance budget
    Gsn1 g(1.0, 1.0, 0.5, policy);
    const double x_hi = g.quantile(1.0 - 1e-12);
    CHECK(std::fabs(g.cdf(x_hi) - (1.0 - 1e-12)) <= policy.quantile_tol);
    const double x_lo = g.quantile(1e-12);
    CHECK(std::fabs(g.cdf(x_lo) - 1e-12) <= policy.quantile_tol);
}

TEST_CASE("multivariate pdf basics") {
    GsnParams params = bivariate(1.0, 0.3, -0.2, 0.5);
    Eigen::VectorXd x(2);
    x << 0.7, 0.1;
    // p = 1 collapses to one bivariate normal term
    Eigen::VectorXd centered = x - params.mu();
    Eigen::MatrixXd sigma = params.sigma().matrix();
    const double quad = centered.transpose() * sigma.inverse() * centered;
    const double ref = std::exp(-0.5 * quad) /
                       (2.0 * M_PI * std::sqrt(sigma.determinant()));
    CHECK(mgsn_pdf(x, params, policy) == doctest::Approx(ref).epsilon(1e-12));

    // evenness for mu = 0 on random points
    GsnParams sym = bivariate(0.4, 0.0, 0.0, 0.6);
    RandomStream stream(3, 3);
    for (int i = 0; i < 25; ++i) {
        Eigen::VectorXd y(2);
        y << 3.0 * stream.normal(), 3.0 * stream.normal();
        CHECK(mgsn_pdf(y, sym, policy) ==
              doctest::Approx(mgsn_pdf(-y, sym, policy)).epsilon(1e-10));
    }
    CHECK_THROWS_AS(mgsn_pdf(Eigen::VectorXd::Zero(3), params, policy),
                    std::invalid_argument);

    // batch evaluation consistent with pointwise
    GsnParams d4 = design4();
    RandomStream s2(17, 0);
    Eigen::MatrixXd pts = mgsn_sample(d4, 10, s2);
    Eigen::VectorXd batch = mgsn_logpdf_batch(pts, d4, policy);
    for (int i = 0; i < 10; ++i) {
        CHECK(batch(i) ==
              doctest::Approx(mgsn_logpdf(pts.row(i), d4, policy)).epsilon(1e-12));
    }
}

TEST_CASE("multivariate cdf") {
    // d = 1, x = 0, mu = 0: every series term is one half
    for (double p : {0.2, 0.6, 1.0}) {
        Eigen::VectorXd mu = Eigen::VectorXd::Zero(1);
        GsnParams params(p, mu, CorrelationMatrix(Eigen::MatrixXd::Identity(1, 1)));
        CHECK(mgsn_cdf(Eigen::VectorXd::Zero(1), params, policy) ==
              doctest::Approx(0.5).epsilon(1e-12));
    }
    // p = 1 reduces to the normal CDF
    GsnParams gauss = bivariate(1.0, 0.0, 0.0, 0.3);
    Eigen::VectorXd x(2);
    x << 0.4, -0.6;
    CHECK(mgsn_cdf(x, gauss, policy) ==
          doctest::Approx(bvn_cdf(0.4, -0.6, 0.3)).epsilon(1e-13));
    // symmetric median orthant: every term is the same closed-form value
    GsnParams half = bivariate(0.5, 0.0, 0.0, 0.5);
    CHECK(mgsn_cdf(Eigen::VectorXd::Zero(2), half, policy) ==
          doctest::Approx(0.25 + std::asin(0.5) / (2.0 * M_PI)).epsilon(1e-10));
}

TEST_CASE("sampling moments and determinism") {
    // p = 1 gives plain multivariate normal draws
    GsnParams gauss = bivariate(1.0, 0.5, -0.5, 0.3);
    RandomStream s1(11, 2);
    Eigen::MatrixXd draws = mgsn_sample(gauss, 200000, s1);
    CHECK(draws.col(0).mean() == doctest::Approx(0.5).epsilon(0.02));
    CHECK(draws.col(1).mean() == doctest::Approx(-0.5).epsilon(0.02));

    // empirical correlation matches the analytic value 0.6
    GsnParams params = bivariate(0.5, 1.0, 1.0, 0.2);
    CHECK(mgsn_corr(params, 0, 1) == doctest::Approx(0.6).epsilon(1e-12));
    RandomStream s2(11, 7);
    Eigen::MatrixXd big = mgsn_sample(params, 1000000, s2);
    std::vector<double> xs(static_cast<size_t>(big.rows()));
    std::vector<double> ys(static_cast<size_t>(big.rows()));
    for (int i = 0; i < big.rows(); ++i) {
        xs[static_cast<size_t>(i)] = big(i, 0);
        ys[static_cast<size_t>(i)] = big(i, 1);
    }
    // batch SE for the correlation estimate
    auto est = testutil::batch_estimate(100, [&](int b) {
        std::vector<double> xb(xs.begin() + b * 10000, xs.begin() + (b + 1) * 10000);
        std::vector<double> yb(ys.begin() + b * 10000, ys.begin() + (b + 1) * 10000);
        return testutil::pearson(xb, yb);
    });
    CHECK(std::fabs(est.mean - 0.6) <= 3.0 * est.se);

    // identical (seed, stream_id) reproduce bit-identical draws
    RandomStream a(123, 9), b(123, 9);
    Eigen::MatrixXd da = mgsn_sample(params, 50, a);
    Eigen::MatrixXd db = mgsn_sample(params, 50, b);
    CHECK((da - db).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("correlation formula collapses") {
    GsnParams plain = bivariate(0.7, 0.0, 0.0, 0.45);
    CHECK(mgsn_corr(plain, 0, 1) == doctest::Approx(0.45).epsilon(1e-14));
    GsnParams uncorr = bivariate(0.3, 0.0, 0.0, 0.0);
    CHECK(mgsn_corr(uncorr, 0, 1) == 0.0);
    CHECK_THROWS_AS(mgsn_corr(plain, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(mgsn_corr(plain, 0, 5), std::invalid_argument);
}

TEST_CASE("marginal closure") {
    GsnParams d4 = design4();
    GsnParams all = marginal_params(d4, {0, 1, 2, 3});
    CHECK(all.sigma().matrix().isApprox(d4.sigma().matrix(), 1e-14));
    GsnParams pair = marginal_params(d4, {0, 1});
    CHECK(pair.p() == 0.5);
    CHECK(pair.mu()(0) == 0.0);
    CHECK(pair.mu()(1) == 0.0);
    CHECK(pair.sigma()(0, 1) == doctest::Approx(0.6).epsilon(1e-14));
    // marginal of a marginal equals the direct sub-marginal
    GsnParams sub1 = marginal_params(marginal_params(d4, {1, 2, 3}), {1, 2});
    GsnParams sub2 = marginal_params(d4, {2, 3});
    CHECK(sub1.sigma().matrix().isApprox(sub2.sigma().matrix(), 1e-14));
    CHECK(sub1.mu().isApprox(sub2.mu(), 1e-14));
    CHECK_THROWS_AS(marginal_params(d4, {}), std::invalid_argument);
}

TEST_CASE("sample cdf agreement within DKW bounds") {
    // level 0.999 one-sample band for n = 1e5
    const int n = 100000;
    const double eps = std::sqrt(std::log(2.0 / 0.001) / (2.0 * n));
    GsnParams params = bivariate(0.5, 1.0, -0.5, 0.4);
    RandomStream stream(2024, 1);
    Eigen::MatrixXd draws = mgsn_sample(params, n, stream);
    for (int j = 0; j < 2; ++j) {
        Gsn1 margin(params.mu()(j), 1.0, params.p(), policy);
        std::vector<double> col(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) col[static_cast<size_t>(i)] = draws(i, j);
        std::sort(col.begin(), col.end());
        const double qlo = col[static_cast<size_t>(n / 100)];
        const double qhi = col[static_cast<size_t>(n - n / 100 - 1)];
        for (int g = 0; g < 20; ++g) {
            const double x = qlo + (qhi - qlo) * g / 19.0;
            const double ecdf =
                static_cast<double>(std::upper_bound(col.begin(), col.end(), x) -
                                    col.begin()) / n;
            CHECK(std::fabs(ecdf - margin.cdf(x)) <= eps);
        }
    }
}

TEST_CASE("marginal sampling equals projected sampling in distribution") {
    const int n = 100000;
    GsnParams d4 = design4();
    RandomStream s1(5150, 0), s2(5150, 1);
    Eigen::MatrixXd full = mgsn_sample(d4, n, s1);
    GsnParams sub = marginal_params(d4, {2});
    Eigen::MatrixXd direct = mgsn_sample(sub, n, s2);
    std::vector<double> a(static_cast<size_t>(n)), b(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        a[static_cast<size_t>(i)] = full(i, 2);
        b[static_cast<size_t>(i)] = direct(i, 0);
    }
    const double d = testutil::ks_two_sample(a, b);
    const double crit = 1.9495 * std::sqrt(2.0 / n);  // two-sample, level 0.999
    CHECK(d < crit);
}

TEST_CASE("bivariate rectangle series") {
    const double inf = std::numeric_limits<double>::infinity();
    // full support sums to one
    CHECK(gsn2_rectangle(-inf, inf, -inf, inf, 1.0, 1.0, 0.5, 0.5, policy) ==
          doctest::Approx(1.0).epsilon(1e-10));
    // consistency with the bivariate cdf at the upper corner
    GsnParams params = bivariate(0.5, 1.0, 1.0, 0.5);
    Eigen::VectorXd x(2);
    x << 1.2, 0.4;
    CHECK(gsn2_rectangle(-inf, 1.2, -inf, 0.4, 1.0, 1.0, 0.5, 0.5, policy) ==
          doctest::Approx(mgsn_cdf(x, params, policy)).epsilon(1e-11));
    CHECK_THROWS_AS(gsn2_rectangle(1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.3, 0.5, policy),
                    std::invalid_argument);
}
