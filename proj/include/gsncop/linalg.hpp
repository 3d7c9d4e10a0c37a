#ifndef GSNCOP_LINALG_HPP
#define GSNCOP_LINALG_HPP

#include <Eigen/Dense>

namespace gsncop {

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
/// Throws FactorizationError when the input is not positive definite; the
/// matrix is never regularized behind the caller's back.
Eigen::MatrixXd cholesky_lower(const Eigen::MatrixXd& m);

/// Symmetric positive definite correlation matrix: unit diagonal,
/// off-diagonal entries in (-1,1).  The Cholesky factor and log-determinant
/// are computed at construction and reused by every density evaluation.
class CorrelationMatrix {
public:
    explicit CorrelationMatrix(const Eigen::MatrixXd& m);

    int dim() const { return static_cast<int>(mat_.rows()); }
    const Eigen::MatrixXd& matrix() const { return mat_; }
    const Eigen::MatrixXd& chol_lower() const { return chol_; }
    double log_det() const { return log_det_; }
    double operator()(int i, int j) const { return mat_(i, j); }

    /// Principal submatrix for the given (ascending, in-range) indices.
    CorrelationMatrix submatrix(const std::vector<int>& keep) const;

private:
    Eigen::MatrixXd mat_;
    Eigen::MatrixXd chol_;
    double log_det_;
};

/// Project a symmetric matrix to the nearest correlation matrix with
/// eigenvalues clipped below at eig_floor, then renormalize the diagonal.
/// Used only for moment-based initializers, never inside likelihoods.
Eigen::MatrixXd nearest_pd_correlation(const Eigen::MatrixXd& m,
                                       double eig_floor = 1e-6);

} // namespace gsncop

#endif
