// spectral.hpp — Spectrum of the Floquet-Lindblad evolution superoperator:
// classification (transient / non-decaying / steady), Jordan-structure
// detection, certified physical NESS extraction, eigenmode trajectories.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "floq/common.hpp"
#include "floq/linalg.hpp"
#include "floq/model.hpp"
#include "floq/propagator.hpp"
#include "floq/superop.hpp"

namespace floq {

enum class SpectralClass { transient, non_decaying, steady };

inline const char* to_string(SpectralClass c)
{
    switch (c) {
        case SpectralClass::transient: return "transient";
        case SpectralClass::non_decaying: return "non_decaying";
        case SpectralClass::steady: return "steady";
    }
    return "?";
}

// All tolerances are explicit; these defaults sit an order of magnitude
// above the propagator residual floor at the default slicing.
struct SpectralOptions {
    double eps_modulus = 1e-8;  // |q| within this of 1 counts as unit circle
    double eps_steady = 1e-7;   // |q - 1| within this counts as steady
    double eps_trace = 1e-8;    // tracelessness threshold for non-steady modes
    double cluster_tol = 1e-7;  // eigenvalue clustering radius
    double rank_tol = 1e-6;     // relative SVD cutoff for geometric multiplicity
    double psd_tol = 1e-8;      // NESS minimum-eigenvalue slack
    double ness_residual_tol = 1e-7;
    int trajectory_samples = 64;
    int search_budget = 10000;  // coordinate-search evaluations for degenerate steady spaces
};

struct JordanCluster {
    Complex center;
    std::vector<std::size_t> members;
    int algebraic = 0;
    int geometric = 0;
    bool on_unit_circle = false;

    bool deficient() const { return geometric < algebraic; }
};

struct JordanReport {
    std::vector<JordanCluster> clusters;

    bool any_deficiency() const
    {
        for (const auto& c : clusters) {
            if (c.deficient()) return true;
        }
        return false;
    }
};

struct FloquetSpectrum {
    int dim_hilbert = 0;
    Vector eigenvalues;                 // q_j = e^{lambda_j T}, canonical order
    std::vector<Matrix> eigenoperators; // unit Frobenius norm, phase-fixed
    std::vector<SpectralClass> classes;
    JordanReport jordan;
    EigenDecomposition decomposition;   // sorted/rescaled right + dual left vectors

    std::vector<std::size_t> indices_of(SpectralClass c) const
    {
        std::vector<std::size_t> out;
        for (std::size_t j = 0; j < classes.size(); ++j) {
            if (classes[j] == c) out.push_back(j);
        }
        return out;
    }

    std::vector<std::size_t> nondecaying_indices() const
    {
        std::vector<std::size_t> out;
        for (std::size_t j = 0; j < classes.size(); ++j) {
            if (classes[j] != SpectralClass::transient) out.push_back(j);
        }
        return out;
    }
};

// lambda = log(q)/T with Im(lambda) in [0, 2*pi/T); phases within 1e-9 of
// the seam 2*pi snap to 0.
inline Complex floquet_log(Complex q, double period)
{
    double theta = std::arg(q);
    if (theta < 0.0) theta += 2.0 * std::numbers::pi;
    if (2.0 * std::numbers::pi - theta < 1e-9) theta = 0.0;
    return Complex(std::log(std::abs(q)), theta) / period;
}

namespace detail {

// Samples vec-space states at n_samples+1 uniform times over one period,
// walking the same frozen-generator slice grid as floquet_operator. Sample
// times split a slice factor in two with the same generator, so the
// full-period product equals U_F exactly regardless of the slice count.
inline std::vector<std::pair<double, Vector>> sample_period(const LindbladModel& model,
                                                            const PropagatorConfig& cfg,
                                                            const Vector& x0, int n_samples)
{
    const double T = model.period();
    const int slices = cfg.slices_per_period;
    const double dt = T / slices;
    const double t0 = cfg.t0;

    std::vector<std::pair<double, Vector>> out;
    out.reserve(static_cast<std::size_t>(n_samples) + 1);
    out.emplace_back(t0, x0);

    Vector x = x0;
    int next_sample = 1;
    for (int s = 0; s < slices; ++s) {
        const double a = t0 + s * dt;
        const double b = t0 + (s + 1) * dt;
        const double t_frozen =
            (cfg.scheme == SliceScheme::midpoint_frozen) ? a + 0.5 * dt : b;
        const Matrix gen = build_liouvillian(model, t_frozen).mat;
        double cursor = a;
        while (next_sample <= n_samples) {
            const double ts = t0 + T * next_sample / n_samples;
            if (ts > b + 1e-12 * T) break;
            const double step = std::max(0.0, ts - cursor);
            x = expm(gen * step) * x;
            cursor = ts;
            out.emplace_back(ts, x);
            ++next_sample;
        }
        if (b - cursor > 0.0) x = expm(gen * (b - cursor)) * x;
    }
    while (next_sample <= n_samples) { // guard against floating drift at the end
        out.emplace_back(t0 + T * next_sample / n_samples, x);
        ++next_sample;
    }
    return out;
}

inline JordanReport jordan_from_eigenvalues(const Matrix& mat, const Vector& eigenvalues,
                                            double cluster_tol, double rank_tol,
                                            double unit_tol)
{
    const std::size_t n = static_cast<std::size_t>(eigenvalues.size());
    std::vector<bool> assigned(n, false);
    JordanReport report;

    for (std::size_t i = 0; i < n; ++i) {
        if (assigned[i]) continue;
        JordanCluster cluster;
        cluster.members.push_back(i);
        assigned[i] = true;
        // Chain clustering: anything within cluster_tol of a member joins.
        bool grew = true;
        while (grew) {
            grew = false;
            for (std::size_t j = 0; j < n; ++j) {
                if (assigned[j]) continue;
                for (std::size_t m : cluster.members) {
                    if (std::abs(eigenvalues(j) - eigenvalues(m)) <= cluster_tol) {
                        cluster.members.push_back(j);
                        assigned[j] = true;
                        grew = true;
                        break;
                    }
                }
            }
        }
        Complex center{0.0, 0.0};
        for (std::size_t m : cluster.members) center += eigenvalues(m);
        cluster.center = center / static_cast<double>(cluster.members.size());
        cluster.algebraic = static_cast<int>(cluster.members.size());
        cluster.on_unit_circle = std::abs(std::abs(cluster.center) - 1.0) <= unit_tol;

        Matrix shifted = mat - cluster.center * Matrix::Identity(mat.rows(), mat.cols());
        Eigen::JacobiSVD<Matrix> svd(shifted);
        const Eigen::VectorXd& sv = svd.singularValues();
        const double sigma_max = sv.size() > 0 ? sv(0) : 0.0;
        const double cut = rank_tol * sigma_max;
        int nullity = 0;
        for (Eigen::Index k = 0; k < sv.size(); ++k) {
            if (sv(k) <= cut) ++nullity;
        }
        cluster.geometric = std::min(nullity, cluster.algebraic);
        report.clusters.push_back(std::move(cluster));
    }
    return report;
}

inline void raise_on_unit_circle_deficiency(const JordanReport& report)
{
    for (const auto& c : report.clusters) {
        if (c.on_unit_circle && c.deficient()) {
            throw IntegrityError(
                "deficient unit-circle eigenvalue cluster at q = (" +
                std::to_string(c.center.real()) + ", " + std::to_string(c.center.imag()) +
                "), algebraic multiplicity " + std::to_string(c.algebraic) +
                ", geometric multiplicity " + std::to_string(c.geometric) +
                "; forbidden for CPTP Floquet maps, input is non-CPTP or numerically broken");
        }
    }
}

} // namespace detail

// Cluster the spectrum and compare geometric vs algebraic multiplicities.
// A deficient cluster off the unit circle is only reported; a deficient
// cluster on it raises an integrity error.
inline JordanReport detect_jordan(const Superoperator& uf, double cluster_tol = 1e-7,
                                  double rank_tol = 1e-6, double unit_tol = 1e-8)
{
    if (!(cluster_tol > 0.0)) throw DomainError("detect_jordan: cluster_tol must be positive");
    EigenDecomposition dec = eig_general(uf.mat);
    JordanReport report = detail::jordan_from_eigenvalues(uf.mat, dec.eigenvalues, cluster_tol,
                                                          rank_tol, unit_tol);
    detail::raise_on_unit_circle_deficiency(report);
    return report;
}

// Full spectrum of U_F with classification and Jordan report. Eigenvalues
// are sorted by modulus (descending), then phase in [0, 2*pi); operators
// are unit Frobenius norm with the leading diagonal entry rotated to be
// real nonnegative.
inline FloquetSpectrum decompose(const Superoperator& uf,
                                 const SpectralOptions& opts = SpectralOptions{})
{
    if (uf.kind != SuperopKind::map) {
        throw DomainError("decompose: expected a map-kind superoperator (U_F), got a generator");
    }
    const int n = uf.dim_hilbert;
    if (uf.mat.rows() != static_cast<Eigen::Index>(n) * n) {
        throw DimensionError("decompose: superoperator matrix does not match dim_hilbert");
    }

    EigenDecomposition dec = eig_general(uf.mat);
    const Eigen::Index m = dec.eigenvalues.size();

    std::vector<Eigen::Index> order(m);
    for (Eigen::Index j = 0; j < m; ++j) order[j] = j;
    auto phase_of = [](Complex q) {
        double th = std::arg(q);
        return th < 0.0 ? th + 2.0 * std::numbers::pi : th;
    };
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        const Complex qa = dec.eigenvalues(a), qb = dec.eigenvalues(b);
        const double ma = std::abs(qa), mb = std::abs(qb);
        if (ma != mb) return ma > mb;
        const double pa = phase_of(qa), pb = phase_of(qb);
        if (pa != pb) return pa < pb;
        if (qa.real() != qb.real()) return qa.real() > qb.real();
        return qa.imag() > qb.imag();
    });

    EigenDecomposition sorted;
    sorted.eigenvalues.resize(m);
    sorted.right_eigenvectors.resize(m, m);
    sorted.left_eigenvectors.resize(m, m);
    sorted.residuals.resize(m);
    sorted.condition_estimate = dec.condition_estimate;
    for (Eigen::Index j = 0; j < m; ++j) {
        sorted.eigenvalues(j) = dec.eigenvalues(order[j]);
        sorted.right_eigenvectors.col(j) = dec.right_eigenvectors.col(order[j]);
        sorted.left_eigenvectors.row(j) = dec.left_eigenvectors.row(order[j]);
        sorted.residuals(j) = dec.residuals(order[j]);
    }

    FloquetSpectrum spec;
    spec.dim_hilbert = n;
    spec.eigenoperators.reserve(m);
    for (Eigen::Index j = 0; j < m; ++j) {
        Matrix op = devectorize(sorted.right_eigenvectors.col(j), n, n);
        // Phase anchor: largest-modulus diagonal entry, falling back to the
        // largest entry overall for purely off-diagonal eigenoperators.
        Complex anchor{0.0, 0.0};
        for (int d = 0; d < n; ++d) {
            if (std::abs(op(d, d)) > std::abs(anchor)) anchor = op(d, d);
        }
        if (std::abs(anchor) < 1e-9) {
            for (Eigen::Index r = 0; r < op.rows(); ++r) {
                for (Eigen::Index c = 0; c < op.cols(); ++c) {
                    if (std::abs(op(r, c)) > std::abs(anchor)) anchor = op(r, c);
                }
            }
        }
        if (std::abs(anchor) > 0.0) {
            const Complex phase = anchor / std::abs(anchor);
            op *= std::conj(phase);
            sorted.right_eigenvectors.col(j) *= std::conj(phase);
            sorted.left_eigenvectors.row(j) *= phase;
        }
        spec.eigenoperators.push_back(std::move(op));
    }

    spec.eigenvalues = sorted.eigenvalues;
    spec.classes.resize(m);
    for (Eigen::Index j = 0; j < m; ++j) {
        const Complex q = spec.eigenvalues(j);
        if (std::abs(q - Complex(1.0, 0.0)) <= opts.eps_steady) {
            spec.classes[j] = SpectralClass::steady;
        } else if (std::abs(std::abs(q) - 1.0) <= opts.eps_modulus) {
            spec.classes[j] = SpectralClass::non_decaying;
        } else {
            spec.classes[j] = SpectralClass::transient;
        }
    }

    spec.jordan = detail::jordan_from_eigenvalues(uf.mat, spec.eigenvalues, opts.cluster_tol,
                                                  opts.rank_tol, opts.eps_modulus);
    detail::raise_on_unit_circle_deficiency(spec.jordan);
    spec.decomposition = std::move(sorted);
    return spec;
}

inline std::size_t cluster_of(const JordanReport& report, std::size_t eigen_index)
{
    for (std::size_t c = 0; c < report.clusters.size(); ++c) {
        for (std::size_t m : report.clusters[c].members) {
            if (m == eigen_index) return c;
        }
    }
    return report.clusters.size();
}

// ---- theorem-shaped margins (consumed by tests and the verify suite) ----

// Worst distance from the eigenvalue multiset to its conjugate multiset.
inline double pairing_defect(const FloquetSpectrum& spec)
{
    double worst = 0.0;
    for (Eigen::Index j = 0; j < spec.eigenvalues.size(); ++j) {
        const Complex target = std::conj(spec.eigenvalues(j));
        double best = std::numeric_limits<double>::infinity();
        for (Eigen::Index k = 0; k < spec.eigenvalues.size(); ++k) {
            best = std::min(best, std::abs(spec.eigenvalues(k) - target));
        }
        worst = std::max(worst, best);
    }
    return worst;
}

// Worst residual of (q*, rho^dag) as an eigenpair of U_F.
inline double conjugate_pair_residual(const FloquetSpectrum& spec, const Superoperator& uf)
{
    double worst = 0.0;
    for (Eigen::Index j = 0; j < spec.eigenvalues.size(); ++j) {
        const Matrix adj = spec.eigenoperators[j].adjoint();
        const Matrix image = uf.apply(adj);
        worst = std::max(worst, (image - std::conj(spec.eigenvalues(j)) * adj).norm());
    }
    return worst;
}

inline double max_modulus_excess(const FloquetSpectrum& spec)
{
    double worst = -std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < spec.eigenvalues.size(); ++j) {
        worst = std::max(worst, std::abs(spec.eigenvalues(j)) - 1.0);
    }
    return worst;
}

inline double max_nonsteady_trace(const FloquetSpectrum& spec)
{
    double worst = 0.0;
    for (Eigen::Index j = 0; j < spec.eigenvalues.size(); ++j) {
        if (spec.classes[j] == SpectralClass::steady) continue;
        worst = std::max(worst, std::abs(spec.eigenoperators[j].trace()));
    }
    return worst;
}

inline double steady_distance(const FloquetSpectrum& spec)
{
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < spec.eigenvalues.size(); ++j) {
        best = std::min(best, std::abs(spec.eigenvalues(j) - Complex(1.0, 0.0)));
    }
    return best;
}

// ---- NESS extraction ----

struct Ness {
    Matrix rho0; // physical stroboscopic fixed point, unit trace
    std::vector<std::pair<double, Matrix>> trajectory; // one period incl. both endpoints
    double fixed_point_residual = 0.0;
    int steady_dimension = 0;
};

namespace detail {

// Real-orthonormal (Hilbert-Schmidt) basis of the Hermitian part of the
// steady space.
inline std::vector<Matrix> hermitian_steady_basis(const FloquetSpectrum& spec,
                                                  const std::vector<std::size_t>& steady)
{
    std::vector<Matrix> basis;
    auto add = [&](Matrix cand) {
        for (const Matrix& b : basis) {
            const double coeff = std::real((b.adjoint() * cand).trace());
            cand -= coeff * b;
        }
        const double nrm = cand.norm();
        if (nrm > 1e-8) basis.push_back(cand / nrm);
    };
    for (std::size_t idx : steady) {
        const Matrix& rho = spec.eigenoperators[idx];
        add(hermitize(rho));
        add(Complex(0.0, -0.5) * (rho - rho.adjoint()));
    }
    return basis;
}

struct SteadyCandidate {
    Matrix rho;
    double min_eig = -std::numeric_limits<double>::infinity();
    bool valid = false;
};

inline SteadyCandidate evaluate_candidate(const std::vector<Matrix>& basis,
                                          const Eigen::VectorXd& coeffs)
{
    SteadyCandidate cand;
    const int n = static_cast<int>(basis.front().rows());
    Matrix combo = Matrix::Zero(n, n);
    for (std::size_t i = 0; i < basis.size(); ++i) combo += coeffs(static_cast<Eigen::Index>(i)) * basis[i];
    const double tr = std::real(combo.trace());
    if (std::abs(tr) < 1e-10) return cand;
    cand.rho = combo / tr;
    cand.min_eig = min_eigenvalue(cand.rho);
    cand.valid = true;
    return cand;
}

} // namespace detail

// Certified physical NESS. One-dimensional steady spaces take the
// Hermitized, trace-normalized eigenoperator directly; degenerate steady
// spaces run a derivative-free coordinate search over real Hermitian
// combinations, maximizing the minimum eigenvalue, and accept the first
// PSD unit-trace candidate.
inline Ness extract_ness(const FloquetSpectrum& spec, const Superoperator& uf,
                         const LindbladModel& model, const PropagatorConfig& cfg,
                         const SpectralOptions& opts = SpectralOptions{})
{
    const std::vector<std::size_t> steady = spec.indices_of(SpectralClass::steady);
    if (steady.empty()) {
        throw IntegrityError("extract_ness: no steady-class eigenvalue found; "
                             "a CPTP Floquet map always has one");
    }
    const int n = spec.dim_hilbert;

    Matrix rho0;
    if (steady.size() == 1) {
        Matrix h = hermitize(spec.eigenoperators[steady[0]]);
        const double tr = std::real(h.trace());
        if (std::abs(tr) < 1e-10) {
            throw IntegrityError("extract_ness: steady eigenoperator is numerically traceless");
        }
        rho0 = h / tr;
        if (min_eigenvalue(rho0) < -opts.psd_tol) {
            throw IntegrityError("extract_ness: non-degenerate steady eigenoperator failed the "
                                 "positivity check (minimum eigenvalue " +
                                 std::to_string(min_eigenvalue(rho0)) + ")");
        }
    } else {
        const std::vector<Matrix> basis = detail::hermitian_steady_basis(spec, steady);
        if (basis.empty()) {
            throw IntegrityError("extract_ness: Hermitian steady basis is empty");
        }
        const Eigen::Index d = static_cast<Eigen::Index>(basis.size());

        std::vector<Eigen::VectorXd> seeds;
        {
            // Hilbert-Schmidt projection of the maximally mixed state.
            Eigen::VectorXd c(d);
            for (Eigen::Index i = 0; i < d; ++i) {
                c(i) = std::real(basis[static_cast<std::size_t>(i)].trace()) / n;
            }
            if (c.norm() > 1e-12) seeds.push_back(c);
        }
        {
            // Transient-damped stroboscopic time average of I/N; lands in
            // the steady space and is PSD up to leftover transients.
            Vector x = vectorize(Matrix::Identity(n, n) / static_cast<double>(n));
            for (int it = 0; it < 64; ++it) x = uf.mat * x;
            Vector acc = Vector::Zero(x.size());
            for (int it = 0; it < 64; ++it) {
                acc += x;
                x = uf.mat * x;
            }
            const Matrix avg = devectorize(acc / 64.0, n, n);
            Eigen::VectorXd c(d);
            for (Eigen::Index i = 0; i < d; ++i) {
                c(i) = std::real((basis[static_cast<std::size_t>(i)].adjoint() * avg).trace());
            }
            if (c.norm() > 1e-12) seeds.push_back(c);
        }
        for (Eigen::Index i = 0; i < d; ++i) {
            Eigen::VectorXd c = Eigen::VectorXd::Zero(d);
            c(i) = 1.0;
            seeds.push_back(c);
            seeds.push_back(-c);
        }

        int evals = 0;
        bool found = false;
        for (const Eigen::VectorXd& seed : seeds) {
            Eigen::VectorXd c = seed;
            detail::SteadyCandidate cur = detail::evaluate_candidate(basis, c);
            ++evals;
            double step = 0.5;
            while (evals < opts.search_budget && step > 1e-9) {
                if (cur.valid && cur.min_eig >= -opts.psd_tol) break;
                bool improved = false;
                for (Eigen::Index i = 0; i < d && evals < opts.search_budget; ++i) {
                    for (double sgn : {1.0, -1.0}) {
                        Eigen::VectorXd trial = c;
                        trial(i) += sgn * step;
                        detail::SteadyCandidate next = detail::evaluate_candidate(basis, trial);
                        ++evals;
                        if (next.valid && (!cur.valid || next.min_eig > cur.min_eig + 1e-15)) {
                            c = trial;
                            cur = next;
                            improved = true;
                        }
                    }
                }
                if (!improved) step *= 0.5;
            }
            if (cur.valid && cur.min_eig >= -opts.psd_tol) {
                rho0 = cur.rho;
                found = true;
                break;
            }
        }
        if (!found) {
            throw IntegrityError("extract_ness: no PSD unit-trace combination found within the "
                                 "search budget; degenerate steady space is numerically broken");
        }
    }

    rho0 = hermitize(rho0);
    rho0 /= rho0.trace().real();

    Ness ness;
    ness.rho0 = rho0;
    ness.steady_dimension = static_cast<int>(steady.size());
    ness.fixed_point_residual = (uf.apply(rho0) - rho0).norm();
    if (ness.fixed_point_residual > opts.ness_residual_tol) {
        throw IntegrityError("extract_ness: fixed-point residual " +
                             std::to_string(ness.fixed_point_residual) +
                             " exceeds tolerance; steady eigenvector is unreliable");
    }

    const int samples = std::max(2, opts.trajectory_samples);
    for (const auto& [t, x] : detail::sample_period(model, cfg, vectorize(rho0), samples)) {
        ness.trajectory.emplace_back(t, devectorize(x, n, n));
    }
    return ness;
}

// Periodic Floquet-Lindblad eigenmode rho_j(t) = e^{-lambda (t-t0)} U(t,t0) rho_j
// sampled over one period (both endpoints included).
inline std::vector<std::pair<double, Matrix>> eigenmode_trajectory(
    const LindbladModel& model, const PropagatorConfig& cfg, Complex lambda, const Matrix& rho_j,
    int samples = 64, double eigenpair_tol = 1e-8)
{
    require_valid(model);
    const int n = model.dim;
    if (rho_j.rows() != n || rho_j.cols() != n) {
        throw DimensionError("eigenmode_trajectory: eigenoperator has wrong shape");
    }
    const double T = model.period();
    const Complex q = std::exp(lambda * T);
    const Superoperator uf = floquet_operator(model, cfg);
    const double residual = (uf.apply(rho_j) - q * rho_j).norm() / std::max(rho_j.norm(), 1e-300);
    if (residual > eigenpair_tol) {
        throw DomainError("eigenmode_trajectory: (e^{lambda T}, rho) is not an eigenpair of U_F "
                          "(residual " + std::to_string(residual) + ")");
    }

    std::vector<std::pair<double, Matrix>> out;
    out.reserve(static_cast<std::size_t>(samples) + 1);
    for (const auto& [t, x] : detail::sample_period(model, cfg, vectorize(rho_j), samples)) {
        const Complex envelope = std::exp(-lambda * (t - cfg.t0));
        out.emplace_back(t, envelope * devectorize(x, n, n));
    }
    return out;
}

struct NondecayingProjection {
    std::vector<std::size_t> indices;   // into the spectrum
    std::vector<Complex> coefficients;  // a_j = <left_j, vec(rho_init)>
    double condition = 0.0;
    bool ill_conditioned = false;
};

// Coefficients of rho_init over the non-decaying eigenoperators, via the
// biorthogonal left eigenvectors.
inline NondecayingProjection nondecaying_projection(const FloquetSpectrum& spec,
                                                    const Superoperator& uf,
                                                    const Matrix& rho_init,
                                                    double condition_warn = 1e10)
{
    (void)uf;
    NondecayingProjection proj;
    proj.indices = spec.nondecaying_indices();
    const Vector v = vectorize(rho_init);
    for (std::size_t idx : proj.indices) {
        proj.coefficients.push_back(
            (spec.decomposition.left_eigenvectors.row(static_cast<Eigen::Index>(idx)) * v)(0));
    }
    proj.condition = spec.decomposition.condition_estimate;
    proj.ill_conditioned = !(proj.condition < condition_warn);
    return proj;
}

// Non-decaying component evolved m periods: sum_j a_j q_j^m rho_j.
inline Matrix nondecaying_state(const FloquetSpectrum& spec, const NondecayingProjection& proj,
                                long m = 0)
{
    Matrix out = Matrix::Zero(spec.dim_hilbert, spec.dim_hilbert);
    for (std::size_t i = 0; i < proj.indices.size(); ++i) {
        const std::size_t idx = proj.indices[i];
        out += proj.coefficients[i] * std::pow(spec.eigenvalues(static_cast<Eigen::Index>(idx)),
                                               static_cast<double>(m)) *
               spec.eigenoperators[idx];
    }
    return out;
}

} // namespace floq
