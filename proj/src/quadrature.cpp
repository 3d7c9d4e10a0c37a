#include "gsncop/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace gsncop {

namespace {

GaussLegendreRule compute_rule(int n) {
    GaussLegendreRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Chebyshev-based starting value, then Newton on P_n.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

} // namespace

const GaussLegendreRule& gauss_legendre_rule(int n_nodes) {
    if (n_nodes < 1) {
        throw std::invalid_argument("gauss_legendre_rule: need n_nodes >= 1");
    }
    static std::mutex mu;
    static std::map<int, GaussLegendreRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n_nodes);
    if (it == cache.end()) {
        it = cache.emplace(n_nodes, compute_rule(n_nodes)).first;
    }
    return it->second;
}

double gauss_legendre_integrate(const std::function<double(double)>& f,
                                double a, double b, int n_nodes) {
    if (a > b) {
        throw std::invalid_argument("gauss_legendre_integrate: a > b");
    }
    if (a == b) return 0.0;
    const GaussLegendreRule& rule = gauss_legendre_rule(n_nodes);
    const double mid = 0.5 * (a + b);
    const double hw = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < n_nodes; ++i) {
        sum += rule.weights[i] * f(mid + hw * rule.nodes[i]);
    }
    return hw * sum;
}

} // namespace gsncop
