#ifndef GSNCOP_OPTIMIZE_HPP
#define GSNCOP_OPTIMIZE_HPP

#include <Eigen/Dense>
#include <functional>

namespace gsncop {

struct BoxOptions {
    int max_iters = 200;
    double grad_tol = 1e-7;    ///< max |projected gradient| stopping rule
    double f_tol = 1e-10;      ///< relative objective-change stopping rule
    double step_tol = 1e-12;
    double fd_step = 1e-6;     ///< central-difference step scale
    /// When positive, rescales each proposed direction so no coordinate moves
    /// more than max_step_scale * max(1, |x_i|) per iteration.  Keeps the
    /// search local on surfaces with distant degenerate ridges.
    double max_step_scale = 0.0;
};

struct BoxResult {
    Eigen::VectorXd x;
    double f = 0.0;
    int iterations = 0;
    long long evaluations = 0;
    bool converged = false;
};

/// Maximize f over the box [lo, hi] by projected BFGS with numerical central
/// difference gradients (step fd_step * max(1,|x_i|), shrunk near bounds).
/// Coordinates with lo_i == hi_i are held fixed.  The objective may return
/// -infinity to reject a point (e.g. a positive-definiteness violation); such
/// points are simply backtracked over, never accepted.  The iterate sequence
/// is monotone: a step is taken only if it improves the objective.
BoxResult box_maximize(const std::function<double(const Eigen::VectorXd&)>& f,
                       const Eigen::VectorXd& x0, const Eigen::VectorXd& lo,
                       const Eigen::VectorXd& hi, const BoxOptions& opts = {});

/// Central-difference Hessian (4-point mixed partials), symmetrized.
/// Step per coordinate is h_scale * max(1, |x_i|).
Eigen::MatrixXd numeric_hessian(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x, double h_scale = 1e-4);

} // namespace gsncop

#endif
