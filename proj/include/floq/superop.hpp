// superop.hpp — Vectorized Liouville superoperators (column-stacking
// convention: vec(A X B) = (B^T kron A) vec(X)).

#pragma once

#include <string>

#include "floq/common.hpp"
#include "floq/model.hpp"

namespace floq {

enum class SuperopKind { generator, map };

struct Superoperator {
    int dim_hilbert = 0;
    Matrix mat; // N^2 x N^2
    SuperopKind kind = SuperopKind::generator;

    // Devectorized action on a density matrix. A member rather than a free
    // `apply` so that calls never collide with std::apply through ADL.
    Matrix apply(const Matrix& rho) const;
};

// Column stacking: vec index j*N + i holds entry (i, j). Eigen stores
// column-major, so this is a straight reshape.
inline Vector vectorize(const Matrix& rho)
{
    return Eigen::Map<const Vector>(rho.data(), rho.size());
}

inline Matrix devectorize(const Vector& v, int rows, int cols)
{
    if (v.size() != static_cast<Eigen::Index>(rows) * cols) {
        throw DimensionError("devectorize: vector length " + std::to_string(v.size()) +
                             " does not match " + std::to_string(rows) + "x" +
                             std::to_string(cols));
    }
    return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

// Dissipator superoperator for a single channel:
// Gamma [ conj(L) kron L - 1/2 I kron L^dag L - 1/2 (L^dag L)^T kron I ].
inline Matrix dissipator_superop(const Matrix& L, double rate)
{
    const Eigen::Index n = L.rows();
    const Matrix eye = Matrix::Identity(n, n);
    const Matrix LdL = L.adjoint() * L;
    return rate * (kron(L.conjugate(), L) - 0.5 * kron(eye, LdL) -
                   0.5 * kron(LdL.transpose(), eye));
}

inline Matrix commutator_superop(const Matrix& h)
{
    const Eigen::Index n = h.rows();
    const Matrix eye = Matrix::Identity(n, n);
    return -I_UNIT * (kron(eye, h) - kron(h.transpose(), eye));
}

// L(t) of the Floquet-Lindblad equation as an N^2 x N^2 generator.
inline Superoperator build_liouvillian(const LindbladModel& model, double t)
{
    require_valid(model);
    const int n = model.dim;
    Matrix mat = commutator_superop(hamiltonian_at(model, t));
    for (const auto& jump : model.jumps) {
        mat += dissipator_superop(jump_at(model, jump, t), jump.rate);
    }
    return Superoperator{n, std::move(mat), SuperopKind::generator};
}

inline Matrix Superoperator::apply(const Matrix& rho) const
{
    const int n = dim_hilbert;
    if (rho.rows() != n || rho.cols() != n) {
        throw DimensionError("Superoperator::apply: density matrix is " +
                             std::to_string(rho.rows()) + "x" + std::to_string(rho.cols()) +
                             ", superoperator expects " + std::to_string(n) + "x" +
                             std::to_string(n));
    }
    return devectorize(mat * vectorize(rho), n, n);
}

// Trace behaviour encoded in the rows: (vec I)^dag mat must vanish for a
// generator and reproduce (vec I)^dag for a map.
inline double trace_functional_defect(const Superoperator& sop)
{
    const int n = sop.dim_hilbert;
    const Vector vec_id = vectorize(Matrix::Identity(n, n));
    Vector row = sop.mat.adjoint() * vec_id;
    if (sop.kind == SuperopKind::map) row -= vec_id;
    return row.norm();
}

inline Superoperator identity_superop(int dim_hilbert)
{
    return Superoperator{dim_hilbert, Matrix::Identity(dim_hilbert * dim_hilbert,
                                                       dim_hilbert * dim_hilbert),
                         SuperopKind::map};
}

} // namespace floq
