#ifndef GSNCOP_QUADRATURE_HPP
#define GSNCOP_QUADRATURE_HPP

#include <functional>
#include <vector>

namespace gsncop {

/// Gauss-Legendre nodes and weights on [-1,1].  Rules are computed on first
/// use and cached; lookup is thread safe.
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

const GaussLegendreRule& gauss_legendre_rule(int n_nodes);

/// Integrate f over [a,b] with an n_nodes Gauss-Legendre rule.  Exact for
/// polynomials of degree <= 2*n_nodes - 1.  Throws if a > b or n_nodes < 1.
double gauss_legendre_integrate(const std::function<double(double)>& f,
                                double a, double b, int n_nodes);

} // namespace gsncop

#endif
