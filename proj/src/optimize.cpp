#include "gsncop/optimize.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gsncop {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::VectorXd clip(const Eigen::VectorXd& x, const Eigen::VectorXd& lo,
                     const Eigen::VectorXd& hi) {
    return x.cwiseMax(lo).cwiseMin(hi);
}

} // namespace

BoxResult box_maximize(const std::function<double(const Eigen::VectorXd&)>& f,
                       const Eigen::VectorXd& x0, const Eigen::VectorXd& lo,
                       const Eigen::VectorXd& hi, const BoxOptions& opts) {
    const int n = static_cast<int>(x0.size());
    if (lo.size() != n || hi.size() != n) {
        throw std::invalid_argument("box_maximize: bound dimension mismatch");
    }
    for (int i = 0; i < n; ++i) {
        if (lo(i) > hi(i)) {
            throw std::invalid_argument("box_maximize: lo > hi");
        }
    }

    BoxResult res;
    res.x = clip(x0, lo, hi);
    res.f = f(res.x);
    res.evaluations = 1;
    if (!std::isfinite(res.f)) {
        throw std::invalid_argument("box_maximize: objective not finite at start");
    }

    auto eval = [&](const Eigen::VectorXd& x) {
        ++res.evaluations;
        const double v = f(x);
        return std::isnan(v) ? -kInf : v;
    };

    // Central differences, shrunk or one-sided near the box boundary and
    // tolerant of -inf rejections on either side.
    auto gradient = [&](const Eigen::VectorXd& x, double fx) {
        Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < n; ++i) {
            if (hi(i) - lo(i) <= 0.0) continue;  // fixed coordinate
            double h = opts.fd_step * std::max(1.0, std::fabs(x(i)));
            const double room_up = hi(i) - x(i);
            const double room_dn = x(i) - lo(i);
            double hu = std::min(h, room_up);
            double hd = std::min(h, room_dn);
            Eigen::VectorXd xp = x, xm = x;
            double fp = -kInf, fm = -kInf;
            if (hu > 1e-14) {
                xp(i) = x(i) + hu;
                fp = eval(xp);
            }
            if (hd > 1e-14) {
                xm(i) = x(i) - hd;
                fm = eval(xm);
            }
            if (std::isfinite(fp) && std::isfinite(fm)) {
                g(i) = (fp - fm) / (hu + hd);
            } else if (std::isfinite(fp)) {
                g(i) = (fp - fx) / hu;
            } else if (std::isfinite(fm)) {
                g(i) = (fx - fm) / hd;
            } else {
                g(i) = 0.0;
            }
        }
        return g;
    };

    auto projected = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& g) {
        Eigen::VectorXd pg = g;
        for (int i = 0; i < n; ++i) {
            if (hi(i) - lo(i) <= 0.0) {
                pg(i) = 0.0;
            } else if (x(i) >= hi(i) - 1e-14 && g(i) > 0.0) {
                pg(i) = 0.0;
            } else if (x(i) <= lo(i) + 1e-14 && g(i) < 0.0) {
                pg(i) = 0.0;
            }
        }
        return pg;
    };

    Eigen::VectorXd g = gradient(res.x, res.f);
    Eigen::MatrixXd H = Eigen::MatrixXd::Identity(n, n);
    int stall = 0;

    for (int iter = 1; iter <= opts.max_iters; ++iter) {
        res.iterations = iter;
        const Eigen::VectorXd pg = projected(res.x, g);
        if (pg.cwiseAbs().maxCoeff() < opts.grad_tol) {
            res.converged = true;
            break;
        }

        Eigen::VectorXd dir = H * g;
        if (dir.dot(pg) <= 0.0 || !dir.allFinite()) {
            H.setIdentity();
            dir = pg;
        }
        if (opts.max_step_scale > 0.0) {
            double ratio = 0.0;
            for (int i = 0; i < n; ++i) {
                ratio = std::max(ratio,
                                 std::fabs(dir(i)) / std::max(1.0, std::fabs(res.x(i))));
            }
            if (ratio > opts.max_step_scale) dir *= opts.max_step_scale / ratio;
        }

        double alpha = 1.0;
        bool accepted = false;
        Eigen::VectorXd xn;
        double fn = -kInf;
        for (int ls = 0; ls < 50; ++ls) {
            xn = clip(res.x + alpha * dir, lo, hi);
            const Eigen::VectorXd step = xn - res.x;
            if (step.cwiseAbs().maxCoeff() < opts.step_tol) {
                alpha *= 0.5;
                continue;
            }
            fn = eval(xn);
            if (std::isfinite(fn) && fn >= res.f + 1e-4 * g.dot(step)) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted || fn <= res.f) {
            // no ascent direction left at this resolution
            res.converged = pg.cwiseAbs().maxCoeff() < 1e2 * opts.grad_tol || stall > 0;
            break;
        }

        const Eigen::VectorXd s = xn - res.x;
        const Eigen::VectorXd gn = gradient(xn, fn);
        const Eigen::VectorXd y = -(gn - g);  // gradient change of -f
        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            const double rho = 1.0 / sy;
            const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
            H = (I - rho * s * y.transpose()) * H * (I - rho * y * s.transpose()) +
                rho * s * s.transpose();
        }

        const double gain = fn - res.f;
        res.x = xn;
        res.f = fn;
        g = gn;
        if (gain < opts.f_tol * std::max(1.0, std::fabs(res.f))) {
            if (++stall >= 2) {
                res.converged = true;
                break;
            }
        } else {
            stall = 0;
        }
    }
    return res;
}

Eigen::MatrixXd numeric_hessian(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x, double h_scale) {
    const int n = static_cast<int>(x.size());
    Eigen::VectorXd h(n);
    for (int i = 0; i < n; ++i) h(i) = h_scale * std::max(1.0, std::fabs(x(i)));
    const double f0 = f(x);
    Eigen::MatrixXd hess(n, n);
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd xp = x, xm = x;
        xp(i) += h(i);
        xm(i) -= h(i);
        hess(i, i) = (f(xp) - 2.0 * f0 + f(xm)) / (h(i) * h(i));
        for (int j = i + 1; j < n; ++j) {
            Eigen::VectorXd xpp = x, xpm = x, xmp = x, xmm = x;
            xpp(i) += h(i); xpp(j) += h(j);
            xpm(i) += h(i); xpm(j) -= h(j);
            xmp(i) -= h(i); xmp(j) += h(j);
            xmm(i) -= h(i); xmm(j) -= h(j);
            const double v =
                (f(xpp) - f(xpm) - f(xmp) + f(xmm)) / (4.0 * h(i) * h(j));
            hess(i, j) = hess(j, i) = v;
        }
    }
    return hess;
}

} // namespace gsncop
