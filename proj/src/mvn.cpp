#include "gsncop/mvn.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "gsncop/errors.hpp"
#include "gsncop/normal.hpp"
#include "gsncop/rng.hpp"

namespace gsncop {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Mean of a standard normal truncated to (-inf, e].
double truncated_mean(double e) {
    const double ce = norm_cdf(e);
    if (ce < 1e-300) return e - 1.0 / e;  // asymptotic for e << 0
    return -norm_pdf(e) / ce;
}

// Cholesky factorization with Genz's greedy ordering: at each step pick the
// remaining variable with the smallest conditional probability, substituting
// truncated-normal expectations for the integration variables.
void ordered_cholesky(Eigen::MatrixXd c, Eigen::VectorXd b,
                      Eigen::MatrixXd& lower, Eigen::VectorXd& bound) {
    const int d = static_cast<int>(b.size());
    lower = Eigen::MatrixXd::Zero(d, d);
    bound = b;
    std::vector<double> y(d, 0.0);
    for (int j = 0; j < d; ++j) {
        int best = j;
        double best_t = kInf;
        for (int i = j; i < d; ++i) {
            double s2 = c(i, i);
            double num = bound(i);
            for (int l = 0; l < j; ++l) {
                s2 -= lower(i, l) * lower(i, l);
                num -= lower(i, l) * y[l];
            }
            if (s2 < 1e-14) s2 = 1e-14;
            const double t = num / std::sqrt(s2);
            if (t < best_t) {
                best_t = t;
                best = i;
            }
        }
        if (best != j) {
            c.row(j).swap(c.row(best));
            c.col(j).swap(c.col(best));
            lower.row(j).swap(lower.row(best));
            std::swap(bound(j), bound(best));
        }
        double s2 = c(j, j);
        for (int l = 0; l < j; ++l) s2 -= lower(j, l) * lower(j, l);
        if (s2 <= 0.0) {
            throw FactorizationError("mvn_cdf: covariance is not positive definite");
        }
        lower(j, j) = std::sqrt(s2);
        for (int i = j + 1; i < d; ++i) {
            double v = c(i, j);
            for (int l = 0; l < j; ++l) v -= lower(i, l) * lower(j, l);
            lower(i, j) = v / lower(j, j);
        }
        y[j] = truncated_mean(best_t);
    }
}

// sqrt(prime) fractional generators for the Richtmyer sequence.
const double kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37,
                          41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
                          97, 101, 103, 107, 109, 113, 127, 131};

double integrand(const Eigen::MatrixXd& lower, const Eigen::VectorXd& bound,
                 const double* w, int d) {
    double prod = 1.0;
    double y[64];
    for (int j = 0; j < d; ++j) {
        double num = bound(j);
        for (int l = 0; l < j; ++l) num -= lower(j, l) * y[l];
        const double e = norm_cdf(num / lower(j, j));
        prod *= e;
        if (prod <= 0.0) return 0.0;
        if (j + 1 < d) {
            double q = w[j] * e;
            q = std::min(std::max(q, 1e-16), 1.0 - 1e-16);
            y[j] = norm_quantile(q);
        }
    }
    return prod;
}

QmcEstimate qmc_orthant(const Eigen::MatrixXd& corr, const Eigen::VectorXd& b,
                        const SeriesPolicy& policy) {
    const int d = static_cast<int>(b.size());
    if (d > 32) {
        throw std::invalid_argument("mvn_cdf: dimension above 32 not supported");
    }
    Eigen::MatrixXd lower;
    Eigen::VectorXd bound;
    ordered_cholesky(corr, b, lower, bound);

    const int n_shifts = 12;
    double alpha[64], shift[n_shifts][64];
    for (int j = 0; j < d - 1; ++j) {
        alpha[j] = std::sqrt(kPrimes[j]);
        alpha[j] -= std::floor(alpha[j]);
    }
    RandomStream shifts_rng(0x5eedULL, 7);
    for (int r = 0; r < n_shifts; ++r) {
        for (int j = 0; j < d - 1; ++j) shift[r][j] = shifts_rng.uniform01();
    }

    double sums[n_shifts] = {0.0};
    long long n_done = 0;
    long long target = 1 << 10;
    const long long cap = 1 << 19;
    QmcEstimate est;
    while (true) {
        for (int r = 0; r < n_shifts; ++r) {
            double acc = 0.0;
            for (long long i = n_done + 1; i <= target; ++i) {
                double w[64];
                for (int j = 0; j < d - 1; ++j) {
                    double v = i * alpha[j] + shift[r][j];
                    v -= std::floor(v);
                    // baker transform smooths the periodized integrand
                    w[j] = std::fabs(2.0 * v - 1.0);
                }
                acc += integrand(lower, bound, w, d);
            }
            sums[r] += acc;
        }
        n_done = target;
        double mean = 0.0;
        for (int r = 0; r < n_shifts; ++r) mean += sums[r] / n_done;
        mean /= n_shifts;
        double var = 0.0;
        for (int r = 0; r < n_shifts; ++r) {
            const double dlt = sums[r] / n_done - mean;
            var += dlt * dlt;
        }
        var /= (n_shifts - 1.0) * n_shifts;
        est.value = std::min(1.0, std::max(0.0, mean));
        est.error_estimate = std::sqrt(var);
        if (est.error_estimate <= policy.mvn_abs_tol || target >= cap) break;
        target *= 2;
    }
    return est;
}

} // namespace

QmcEstimate mvn_cdf(const Eigen::VectorXd& upper, const Eigen::VectorXd& mean,
                    const Eigen::MatrixXd& cov, const SeriesPolicy& policy) {
    const int d = static_cast<int>(upper.size());
    if (mean.size() != d || cov.rows() != d || cov.cols() != d || d < 1) {
        throw std::invalid_argument("mvn_cdf: dimension mismatch");
    }
    // Standardize and strip +inf coordinates (they integrate to 1).
    std::vector<int> keep;
    Eigen::VectorXd b_full(d);
    for (int i = 0; i < d; ++i) {
        const double sd = std::sqrt(cov(i, i));
        if (!(sd > 0.0)) {
            throw FactorizationError("mvn_cdf: covariance has non-positive diagonal");
        }
        b_full(i) = (upper(i) - mean(i)) / sd;
        if (b_full(i) == -kInf) return {0.0, 0.0};
        if (b_full(i) < kInf) keep.push_back(i);
    }
    const int k = static_cast<int>(keep.size());
    if (k == 0) return {1.0, 0.0};
    Eigen::VectorXd b(k);
    Eigen::MatrixXd corr(k, k);
    for (int a = 0; a < k; ++a) {
        b(a) = b_full(keep[a]);
        for (int c = 0; c < k; ++c) {
            corr(a, c) = cov(keep[a], keep[c]) /
                         std::sqrt(cov(keep[a], keep[a]) * cov(keep[c], keep[c]));
        }
    }
    if (k == 1) return {norm_cdf(b(0)), 0.0};
    if (k == 2) {
        double r = corr(0, 1);
        r = std::max(-1.0 + 1e-15, std::min(1.0 - 1e-15, r));
        return {bvn_cdf(b(0), b(1), r), 0.0};
    }
    return qmc_orthant(corr, b, policy);
}

} // namespace gsncop
