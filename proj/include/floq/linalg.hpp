// linalg.hpp — Dense complex linear-algebra substrate: matrix exponential,
// general (non-Hermitian) eigendecomposition, SVD-based null spaces.

#pragma once

#include <limits>
#include <string>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "floq/common.hpp"

namespace floq {

// e^a by scaling-and-squaring with Pade approximants. Relative error is
// well below 1e-12 for ||a|| <= 10.
inline Matrix expm(const Matrix& a)
{
    require_square(a, "expm");
    if (!is_finite(a)) throw DomainError("expm: input has non-finite entries");
    return a.exp();
}

struct EigenDecomposition {
    Vector eigenvalues;
    Matrix right_eigenvectors; // columns v_j, unit 2-norm
    Matrix left_eigenvectors;  // rows w_j^dag with w_j^dag v_k = delta_jk where invertible
    Eigen::VectorXd residuals; // ||A v_j - q_j v_j||_2 per eigenpair
    double condition_estimate = 0.0; // ~ ||V|| ||V^-1||; inf when V is numerically singular
};

// Full eigendecomposition of a general complex square matrix (Schur-based).
// Left eigenvectors come from inverting the eigenvector matrix and are
// biorthogonal to the right ones whenever the matrix is diagonalizable;
// for a (near-)defective input the condition estimate blows up and flags it.
inline EigenDecomposition eig_general(const Matrix& a)
{
    require_square(a, "eig_general");
    if (!is_finite(a)) throw DomainError("eig_general: input has non-finite entries");

    Eigen::ComplexEigenSolver<Matrix> solver(a, /*computeEigenvectors=*/true);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eig_general: QR iteration failed to converge (dim " +
                             std::to_string(a.rows()) + ", info " +
                             std::to_string(static_cast<int>(solver.info())) + ")");
    }

    EigenDecomposition dec;
    dec.eigenvalues = solver.eigenvalues();
    dec.right_eigenvectors = solver.eigenvectors();

    const Eigen::Index n = a.rows();
    dec.residuals.resize(n);
    const double scale = std::max(a.norm(), 1.0);
    for (Eigen::Index j = 0; j < n; ++j) {
        dec.residuals(j) =
            (a * dec.right_eigenvectors.col(j) - dec.eigenvalues(j) * dec.right_eigenvectors.col(j))
                .norm() /
            scale;
    }

    Eigen::FullPivLU<Matrix> lu(dec.right_eigenvectors);
    if (lu.isInvertible()) {
        dec.left_eigenvectors = lu.inverse();
        dec.condition_estimate = dec.right_eigenvectors.norm() * dec.left_eigenvectors.norm();
    } else {
        // Defective to machine precision: fall back to the pseudoinverse so
        // callers still get best-effort dual rows, and flag via the estimate.
        dec.left_eigenvectors =
            dec.right_eigenvectors.completeOrthogonalDecomposition().pseudoInverse();
        dec.condition_estimate = std::numeric_limits<double>::infinity();
    }
    return dec;
}

// Orthonormal basis of the numerical null space: singular values below
// rank_tol * sigma_max are treated as zero. Columns of the result span
// the null space; an empty (n x 0) matrix means full rank.
inline Matrix null_space(const Matrix& a, double rank_tol)
{
    if (!(rank_tol > 0.0)) throw DomainError("null_space: rank_tol must be positive");
    if (!is_finite(a)) throw DomainError("null_space: input has non-finite entries");

    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const Eigen::Index n = a.cols();
    const double sigma_max = sv.size() > 0 ? sv(0) : 0.0;
    const double cut = rank_tol * sigma_max;

    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > cut) ++rank;
    }
    return svd.matrixV().rightCols(n - rank);
}

} // namespace floq
