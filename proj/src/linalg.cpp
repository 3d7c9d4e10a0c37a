#include "gsncop/linalg.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "gsncop/errors.hpp"

namespace gsncop {

Eigen::MatrixXd cholesky_lower(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument("cholesky_lower: matrix must be square");
    }
    if (!m.isApprox(m.transpose(), 1e-12)) {
        throw std::invalid_argument("cholesky_lower: matrix must be symmetric");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success) {
        throw FactorizationError("cholesky_lower: matrix is not positive definite");
    }
    return llt.matrixL();
}

CorrelationMatrix::CorrelationMatrix(const Eigen::MatrixXd& m) : mat_(m) {
    const int d = static_cast<int>(m.rows());
    if (m.cols() != d || d < 1) {
        throw std::invalid_argument("CorrelationMatrix: matrix must be square");
    }
    for (int i = 0; i < d; ++i) {
        if (std::fabs(mat_(i, i) - 1.0) > 1e-12) {
            throw std::invalid_argument("CorrelationMatrix: diagonal must be 1");
        }
        mat_(i, i) = 1.0;
        for (int j = 0; j < i; ++j) {
            if (std::fabs(mat_(i, j) - mat_(j, i)) > 1e-12) {
                throw std::invalid_argument("CorrelationMatrix: matrix must be symmetric");
            }
            const double r = 0.5 * (mat_(i, j) + mat_(j, i));
            if (!(std::fabs(r) < 1.0)) {
                std::ostringstream os;
                os << "CorrelationMatrix: entry (" << i << "," << j
                   << ") = " << r << " outside (-1,1)";
                throw std::invalid_argument(os.str());
            }
            mat_(i, j) = mat_(j, i) = r;
        }
    }
    chol_ = cholesky_lower(mat_);
    log_det_ = 2.0 * chol_.diagonal().array().log().sum();
}

CorrelationMatrix CorrelationMatrix::submatrix(const std::vector<int>& keep) const {
    const int k = static_cast<int>(keep.size());
    if (k < 1) {
        throw std::invalid_argument("CorrelationMatrix::submatrix: empty index set");
    }
    Eigen::MatrixXd sub(k, k);
    for (int a = 0; a < k; ++a) {
        for (int b = 0; b < k; ++b) {
            if (keep[a] < 0 || keep[a] >= dim()) {
                throw std::invalid_argument("CorrelationMatrix::submatrix: index out of range");
            }
            sub(a, b) = mat_(keep[a], keep[b]);
        }
    }
    return CorrelationMatrix(sub);
}

Eigen::MatrixXd nearest_pd_correlation(const Eigen::MatrixXd& m, double eig_floor) {
    Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(eig_floor);
    Eigen::MatrixXd fixed =
        es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
    Eigen::VectorXd scale = fixed.diagonal().cwiseSqrt().cwiseInverse();
    Eigen::MatrixXd corr = scale.asDiagonal() * fixed * scale.asDiagonal();
    const int d = static_cast<int>(corr.rows());
    for (int i = 0; i < d; ++i) {
        corr(i, i) = 1.0;
        for (int j = 0; j < i; ++j) {
            // keep strictly inside (-1,1) so CorrelationMatrix accepts it
            double r = 0.5 * (corr(i, j) + corr(j, i));
            r = std::max(-1.0 + 1e-10, std::min(1.0 - 1e-10, r));
            corr(i, j) = corr(j, i) = r;
        }
    }
    return corr;
}

} // namespace gsncop
