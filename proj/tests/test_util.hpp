#ifndef GSNCOP_TEST_UTIL_HPP
#define GSNCOP_TEST_UTIL_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "gsncop/normal.hpp"

namespace testutil {

// Kendall's tau via Knight's O(n log n) inversion counting.
inline double kendall_tau(std::vector<double> x, std::vector<double> y) {
    const size_t n = x.size();
    std::vector<size_t> idx(n);
    std::iota(idx.begin(), idx.end(), size_t{0});
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
        if (x[a] != x[b]) return x[a] < x[b];
        return y[a] < y[b];
    });
    std::vector<double> ys(n);
    for (size_t i = 0; i < n; ++i) ys[i] = y[idx[i]];
    // merge sort counting inversions of ys
    std::vector<double> buf(n);
    long long swaps = 0;
    for (size_t width = 1; width < n; width *= 2) {
        for (size_t lo = 0; lo + width < n; lo += 2 * width) {
            const size_t mid = lo + width;
            const size_t hi = std::min(lo + 2 * width, n);
            size_t i = lo, j = mid, k = lo;
            while (i < mid && j < hi) {
                if (ys[i] <= ys[j]) {
                    buf[k++] = ys[i++];
                } else {
                    swaps += static_cast<long long>(mid - i);
                    buf[k++] = ys[j++];
                }
            }
            while (i < mid) buf[k++] = ys[i++];
            while (j < hi) buf[k++] = ys[j++];
            std::copy(buf.begin() + lo, buf.begin() + hi, ys.begin() + lo);
        }
    }
    const double n_pairs = 0.5 * static_cast<double>(n) * (n - 1.0);
    return 1.0 - 2.0 * static_cast<double>(swaps) / n_pairs;
}

inline std::vector<double> ranks(const std::vector<double>& x) {
    const size_t n = x.size();
    std::vector<size_t> idx(n);
    std::iota(idx.begin(), idx.end(), size_t{0});
    std::sort(idx.begin(), idx.end(),
              [&](size_t a, size_t b) { return x[a] < x[b]; });
    std::vector<double> r(n);
    for (size_t i = 0; i < n; ++i) r[idx[i]] = static_cast<double>(i + 1);
    return r;
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const size_t n = x.size();
    double mx = 0, my = 0;
    for (size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0, syy = 0;
    for (size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

inline double spearman_rho(const std::vector<double>& x,
                           const std::vector<double>& y) {
    return pearson(ranks(x), ranks(y));
}

// One-sample Kolmogorov statistic against the uniform CDF on (0,1).
inline double ks_uniform(std::vector<double> u) {
    std::sort(u.begin(), u.end());
    const double n = static_cast<double>(u.size());
    double d = 0.0;
    for (size_t i = 0; i < u.size(); ++i) {
        d = std::max(d, std::fabs((i + 1) / n - u[i]));
        d = std::max(d, std::fabs(u[i] - i / n));
    }
    return d;
}

// Two-sample Kolmogorov statistic.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j]) {
            ++i;
        } else {
            ++j;
        }
        d = std::max(d, std::fabs(static_cast<double>(i) / a.size() -
                                  static_cast<double>(j) / b.size()));
    }
    return d;
}

// Mean and standard error of a statistic over equal-size batches; robust for
// dependent-data Monte Carlo checks.
struct BatchEstimate {
    double mean = 0.0;
    double se = 0.0;
};

template <typename F>
BatchEstimate batch_estimate(int n_batches, F&& stat_of_batch) {
    std::vector<double> vals(static_cast<size_t>(n_batches));
    for (int b = 0; b < n_batches; ++b) vals[static_cast<size_t>(b)] = stat_of_batch(b);
    BatchEstimate e;
    for (double v : vals) e.mean += v;
    e.mean /= n_batches;
    double var = 0.0;
    for (double v : vals) var += (v - e.mean) * (v - e.mean);
    var /= (n_batches - 1.0);
    e.se = std::sqrt(var / n_batches);
    return e;
}

// Gaussian copula log density with correlation rho -- an independent oracle
// for the p = 1 reduction.
inline double gaussian_copula_logdensity(double u1, double u2, double rho) {
    const double z1 = gsncop::norm_quantile(u1);
    const double z2 = gsncop::norm_quantile(u2);
    const double r2 = rho * rho;
    return -0.5 * std::log(1.0 - r2) -
           (r2 * (z1 * z1 + z2 * z2) - 2.0 * rho * z1 * z2) / (2.0 * (1.0 - r2));
}

} // namespace testutil

#endif
