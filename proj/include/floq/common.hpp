// common.hpp — Shared scalar/matrix aliases, error types and small dense-matrix helpers

#pragma once

#include <complex>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

namespace floq {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr Complex I_UNIT{0.0, 1.0};

// Error hierarchy; the CLI maps each category to a distinct exit code.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DimensionError : Error {
    using Error::Error;
};
struct DomainError : Error {
    using Error::Error;
};
struct ValidationError : Error {
    using Error::Error;
};
struct ConfigError : Error {
    using Error::Error;
};
struct NumericalError : Error {
    using Error::Error;
};
struct ParseError : Error {
    using Error::Error;
};
struct IoError : Error {
    using Error::Error;
};
// Violation of a structural guarantee that valid CPTP input cannot produce;
// signals numerical trouble or non-physical input.
struct IntegrityError : Error {
    using Error::Error;
};

inline bool is_finite(const Matrix& a)
{
    return a.allFinite();
}

inline void require_square(const Matrix& a, const char* what)
{
    if (a.rows() != a.cols()) {
        throw DimensionError(std::string(what) + ": matrix is " + std::to_string(a.rows()) +
                             "x" + std::to_string(a.cols()) + ", expected square");
    }
}

inline Matrix kron(const Matrix& a, const Matrix& b)
{
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

inline Matrix hermitize(const Matrix& a)
{
    return 0.5 * (a + a.adjoint());
}

inline double hermiticity_defect(const Matrix& a)
{
    return (a - a.adjoint()).norm();
}

// Smallest eigenvalue of the Hermitian part of a.
inline double min_eigenvalue(const Matrix& a)
{
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(a), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

inline Matrix pauli_x()
{
    Matrix s(2, 2);
    s << 0, 1, 1, 0;
    return s;
}

inline Matrix pauli_y()
{
    Matrix s(2, 2);
    s << 0, Complex(0, -1), Complex(0, 1), 0;
    return s;
}

inline Matrix pauli_z()
{
    Matrix s(2, 2);
    s << 1, 0, 0, -1;
    return s;
}

// |1><2| in the (ground, excited) / (valence, conduction) basis ordering;
// emission toward the bath.
inline Matrix sigma_plus()
{
    Matrix s = Matrix::Zero(2, 2);
    s(0, 1) = 1.0;
    return s;
}

inline Matrix sigma_minus()
{
    Matrix s = Matrix::Zero(2, 2);
    s(1, 0) = 1.0;
    return s;
}

// Thread budget: ENGINE_THREADS caps parallelism, 0 or unset means auto.
inline unsigned thread_budget()
{
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("ENGINE_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) return static_cast<unsigned>(v);
    }
    return hw;
}

// Index-parallel loop with deterministic output: the body writes to
// per-index slots, scheduling never affects results.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body)
{
    unsigned threads = thread_budget();
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    if (threads > n) threads = static_cast<unsigned>(n);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < n; i += threads) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

// Pairwise (cascade) summation; reduction order is fixed by the index
// order, independent of any parallel production of the terms.
template <typename T>
T pairwise_sum(const std::vector<T>& terms, std::size_t lo, std::size_t hi)
{
    if (hi == lo) return T{};
    if (hi - lo == 1) return terms[lo];
    std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum(terms, lo, mid) + pairwise_sum(terms, mid, hi);
}

template <typename T>
T pairwise_sum(const std::vector<T>& terms)
{
    return pairwise_sum(terms, 0, terms.size());
}

} // namespace floq
