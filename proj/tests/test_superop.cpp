#include <catch2/catch_amalgamated.hpp>

#include <numbers>

#include "floq/ensemble.hpp"
#include "floq/superop.hpp"

using namespace floq;

namespace {

LindbladModel amplitude_damping(double rate = 1.0)
{
    LindbladModel m;
    m.dim = 2;
    m.omega = 2.0 * std::numbers::pi;
    m.h_fourier[0] = Matrix::Zero(2, 2);
    m.jumps.push_back(Jump{sigma_plus(), rate, {}});
    return m;
}

// Brute-force Liouvillian: apply the master-equation right-hand side to
// each elementary matrix and stack columns.
Matrix liouvillian_bruteforce(const LindbladModel& model, double t)
{
    const int n = model.dim;
    const Matrix h = hamiltonian_at(model, t);
    Matrix out(n * n, n * n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            Matrix e = Matrix::Zero(n, n);
            e(i, j) = 1.0;
            Matrix rhs = -I_UNIT * (h * e - e * h);
            for (const auto& jump : model.jumps) {
                const Matrix L = jump_at(model, jump, t);
                const Matrix LdL = L.adjoint() * L;
                rhs += jump.rate * (L * e * L.adjoint() - 0.5 * (LdL * e + e * LdL));
            }
            out.col(j * n + i) = vectorize(rhs);
        }
    }
    return out;
}

} // namespace

TEST_CASE("vectorize: column stacking")
{
    REQUIRE((vectorize(Matrix::Identity(2, 2)) - (Vector(4) << 1, 0, 0, 1).finished()).norm() <
            1e-15);
    Matrix e12 = Matrix::Zero(2, 2);
    e12(0, 1) = 1.0; // |1><2|
    REQUIRE((vectorize(e12) - (Vector(4) << 0, 0, 1, 0).finished()).norm() < 1e-15);
}

TEST_CASE("vectorize: vec(A X B) = (B^T kron A) vec(X)")
{
    RngStream rng(3);
    for (int rep = 0; rep < 5; ++rep) {
        const Matrix x = rng.matrix(2);
        const Matrix lhs = pauli_x() * x * pauli_z();
        const Vector rhs = kron(pauli_z().transpose(), pauli_x()) * vectorize(x);
        REQUIRE((vectorize(lhs) - rhs).norm() < 1e-14);
    }
}

TEST_CASE("devectorize: inverse of vectorize, rejects bad shapes")
{
    RngStream rng(4);
    const Matrix x = rng.matrix(3);
    REQUIRE((devectorize(vectorize(x), 3, 3) - x).norm() < 1e-15);
    REQUIRE_THROWS_AS(devectorize(Vector::Zero(5), 2, 2), DimensionError);
}

TEST_CASE("build_liouvillian: trivial and analytic spectra")
{
    LindbladModel empty;
    empty.dim = 2;
    empty.omega = 1.0;
    empty.h_fourier[0] = Matrix::Zero(2, 2);
    REQUIRE(build_liouvillian(empty, 0.0).mat.norm() < 1e-15);

    // Amplitude damping: eigenvalues {0, -1, -1/2, -1/2} at Gamma = 1.
    const Superoperator damp = build_liouvillian(amplitude_damping(), 0.0);
    Eigen::VectorXcd evs = Eigen::ComplexEigenSolver<Matrix>(damp.mat).eigenvalues();
    std::vector<double> re(evs.size());
    for (int i = 0; i < evs.size(); ++i) {
        REQUIRE(std::abs(evs(i).imag()) < 1e-12);
        re[static_cast<std::size_t>(i)] = evs(i).real();
    }
    std::sort(re.begin(), re.end());
    REQUIRE(std::abs(re[0] + 1.0) < 1e-12);
    REQUIRE(std::abs(re[1] + 0.5) < 1e-12);
    REQUIRE(std::abs(re[2] + 0.5) < 1e-12);
    REQUIRE(std::abs(re[3]) < 1e-12);

    // Pure commutator with H = sigma_z / 2: eigenvalues {0, 0, +i, -i}.
    LindbladModel comm;
    comm.dim = 2;
    comm.omega = 1.0;
    comm.h_fourier[0] = 0.5 * pauli_z();
    const Superoperator cs = build_liouvillian(comm, 0.0);
    Eigen::VectorXcd evc = Eigen::ComplexEigenSolver<Matrix>(cs.mat).eigenvalues();
    int zeros = 0, plus = 0, minus = 0;
    for (int i = 0; i < evc.size(); ++i) {
        if (std::abs(evc(i)) < 1e-12) ++zeros;
        if (std::abs(evc(i) - Complex(0, 1)) < 1e-12) ++plus;
        if (std::abs(evc(i) - Complex(0, -1)) < 1e-12) ++minus;
    }
    REQUIRE(zeros == 2);
    REQUIRE(plus == 1);
    REQUIRE(minus == 1);
}

TEST_CASE("build_liouvillian: rejects invalid models")
{
    LindbladModel bad;
    bad.dim = 2;
    bad.omega = 1.0;
    bad.h_fourier[0] = Matrix::Zero(2, 2);
    bad.jumps.push_back(Jump{sigma_plus(), -1.0, {}});
    REQUIRE_THROWS_AS(build_liouvillian(bad, 0.0), ValidationError);
}

TEST_CASE("build_liouvillian: Kronecker construction equals brute force")
{
    RngStream rng(12);
    for (int rep = 0; rep < 8; ++rep) {
        RandomModelOptions mo;
        mo.n_harmonics = rep % 3;
        mo.n_jumps = rng.integer(1, 3);
        const LindbladModel m = make_random_model(rng, rng.integer(2, 4), mo);
        const double t = rng.uniform(0.0, m.period());
        const Superoperator sop = build_liouvillian(m, t);
        REQUIRE((sop.mat - liouvillian_bruteforce(m, t)).norm() < 1e-12);
    }
}

TEST_CASE("generator annihilates the trace functional")
{
    RngStream rng(13);
    for (int rep = 0; rep < 8; ++rep) {
        RandomModelOptions mo;
        mo.n_harmonics = 1;
        mo.n_jumps = rng.integer(0, 3);
        const LindbladModel m = make_random_model(rng, rng.integer(2, 4), mo);
        const Superoperator sop = build_liouvillian(m, rng.uniform(0.0, 3.0));
        REQUIRE(trace_functional_defect(sop) < 1e-10);
    }
}

TEST_CASE("apply: trace annihilation, damping flow, zero generator")
{
    const Superoperator damp = build_liouvillian(amplitude_damping(0.8), 0.0);
    RngStream rng(14);
    const Matrix rho = random_physical_density(rng, 2);
    REQUIRE(std::abs(damp.apply(rho).trace()) < 1e-12);

    Matrix excited = Matrix::Zero(2, 2);
    excited(1, 1) = 1.0;
    Matrix expected(2, 2);
    expected << 0.8, 0, 0, -0.8; // population flows down at rate Gamma
    REQUIRE((damp.apply(excited) - expected).norm() < 1e-13);

    LindbladModel empty;
    empty.dim = 2;
    empty.omega = 1.0;
    empty.h_fourier[0] = Matrix::Zero(2, 2);
    REQUIRE(build_liouvillian(empty, 0.0).apply(rho).norm() < 1e-14);

    REQUIRE_THROWS_AS(damp.apply(Matrix::Zero(3, 3)), DimensionError);
}

TEST_CASE("Hermiticity covariance: apply(L, rho^dag) = apply(L, rho)^dag")
{
    RngStream rng(15);
    for (int rep = 0; rep < 6; ++rep) {
        RandomModelOptions mo;
        mo.n_harmonics = 1;
        mo.n_jumps = 2;
        const LindbladModel m = make_random_model(rng, 3, mo);
        const Superoperator sop = build_liouvillian(m, rng.uniform(0.0, 2.0));
        const Matrix rho = rng.matrix(3);
        const Matrix lhs = sop.apply(rho.adjoint());
        const Matrix rhs = sop.apply(rho).adjoint();
        REQUIRE((lhs - rhs).norm() < 1e-12);
    }
}
