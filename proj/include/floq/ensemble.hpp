// ensemble.hpp — Seeded random Floquet-Lindblad models and the spectral
// theorem suite run over them (backs the `verify` command and the
// acceptance gate).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "floq/common.hpp"
#include "floq/model.hpp"
#include "floq/propagator.hpp"
#include "floq/spectral.hpp"
#include "floq/superop.hpp"

namespace floq {

// Uniform doubles straight from the engine bits; keeps streams identical
// across standard libraries.
struct RngStream {
    std::mt19937_64 engine;

    explicit RngStream(std::uint64_t seed) : engine(seed) {}

    double uniform(double lo = 0.0, double hi = 1.0)
    {
        const double u = std::ldexp(static_cast<double>(engine() >> 11), -53);
        return lo + (hi - lo) * u;
    }

    Complex complex_unit()
    {
        return Complex(uniform(-1.0, 1.0), uniform(-1.0, 1.0));
    }

    Matrix matrix(int n)
    {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) m(i, j) = complex_unit();
        }
        return m;
    }

    Matrix hermitian(int n, double scale)
    {
        Matrix m = matrix(n);
        return scale * hermitize(m);
    }

    int integer(int lo, int hi) // inclusive
    {
        return lo + static_cast<int>(engine() % static_cast<std::uint64_t>(hi - lo + 1));
    }
};

// Random physical density matrix (Ginibre construction).
inline Matrix random_physical_density(RngStream& rng, int n)
{
    const Matrix g = rng.matrix(n);
    Matrix rho = g * g.adjoint();
    return rho / rho.trace().real();
}

struct RandomModelOptions {
    int n_harmonics = 1;     // 0 = static, 1 or 2 = driven
    int n_jumps = 1;         // 0 = closed (Gamma = 0)
    double h0_scale = 1.0;
    double drive_scale = 0.4;
    double rate_lo = 0.2;
    double rate_hi = 1.0;
    double omega_lo = 1.2;
    double omega_hi = 2.0;
};

inline LindbladModel make_random_model(RngStream& rng, int dim, const RandomModelOptions& opts)
{
    LindbladModel model;
    model.dim = dim;
    model.omega = rng.uniform(opts.omega_lo, opts.omega_hi);
    model.h_fourier[0] = rng.hermitian(dim, opts.h0_scale);
    for (int l = 1; l <= opts.n_harmonics; ++l) {
        const Matrix g = (opts.drive_scale / l) * rng.matrix(dim);
        model.h_fourier[l] = g;
        model.h_fourier[-l] = g.adjoint();
    }
    for (int mu = 0; mu < opts.n_jumps; ++mu) {
        Matrix op = rng.matrix(dim);
        op /= op.norm();
        model.jumps.push_back(Jump{std::move(op), rng.uniform(opts.rate_lo, opts.rate_hi), {}});
    }
    return model;
}

inline Matrix matrix_power(Matrix base, long exponent)
{
    Matrix result = Matrix::Identity(base.rows(), base.cols());
    while (exponent > 0) {
        if (exponent & 1) result = result * base;
        base = base * base;
        exponent >>= 1;
    }
    return result;
}

struct CheckResult {
    std::string name;
    int samples = 0;
    double worst = 0.0;
    double threshold = 0.0;
    bool pass = true;
    std::string worst_at; // which ensemble member produced the worst margin
};

struct VerifyReport {
    std::uint64_t seed = 0;
    int driven_models = 0;
    int static_models = 0;
    int unitary_models = 0;
    std::vector<CheckResult> checks;

    bool all_pass() const
    {
        for (const auto& c : checks) {
            if (!c.pass) return false;
        }
        return true;
    }

    std::string str() const
    {
        std::ostringstream out;
        out << "theorem suite: seed=" << seed << " models=" << driven_models << " driven + "
            << static_models << " static + " << unitary_models << " unitary (N in {2,3,4})\n";
        for (const auto& c : checks) {
            out << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << ": samples=" << c.samples
                << " worst=" << c.worst << " threshold=" << c.threshold;
            if (!c.worst_at.empty()) out << " at " << c.worst_at;
            out << '\n';
        }
        return out.str();
    }
};

struct EnsembleOptions {
    std::uint64_t seed = 1;
    int models = 100;        // driven, dissipative
    int static_models = 10;  // time-independent sub-ensemble (single-slice U_F = e^{LT})
    int unitary_models = 10; // Gamma = 0 sub-ensemble
    int initial_states = 10; // convergence checks per model
    int slices_per_period = 512;
    SpectralOptions spectral = SpectralOptions{};
};

namespace detail {

struct Margin {
    double value = -std::numeric_limits<double>::infinity();
    std::string at;

    void update(double v, const std::string& where)
    {
        if (v > value) {
            value = v;
            at = where;
        }
    }
};

struct ModelMargins {
    Margin pairing, pair_residual, traceless, modulus, steady_dist, jordan_flags;
    Margin ness_herm, ness_trace, ness_negativity, ness_residual;
    Margin convergence, real_eig_herm, unitary_modulus;
    int convergence_samples = 0;
    int real_eig_samples = 0;
};

inline void run_spectrum_checks(const Superoperator& uf, const std::string& tag, bool unitary,
                                bool check_ness, const LindbladModel* model,
                                const PropagatorConfig* cfg, const SpectralOptions& sopts,
                                int initial_states, std::uint64_t state_seed, ModelMargins& mm)
{
    FloquetSpectrum spec;
    try {
        spec = decompose(uf, sopts);
        mm.jordan_flags.update(0.0, tag);
    } catch (const IntegrityError&) {
        // Unit-circle Jordan deficiency detected by decompose.
        mm.jordan_flags.update(1.0, tag);
        return;
    }

    mm.pairing.update(pairing_defect(spec), tag);
    mm.pair_residual.update(conjugate_pair_residual(spec, uf), tag);
    mm.traceless.update(max_nonsteady_trace(spec), tag);
    mm.modulus.update(max_modulus_excess(spec), tag);
    mm.steady_dist.update(steady_distance(spec), tag);

    if (unitary) {
        double worst = 0.0;
        for (Eigen::Index j = 0; j < spec.eigenvalues.size(); ++j) {
            worst = std::max(worst, std::abs(std::abs(spec.eigenvalues(j)) - 1.0));
        }
        mm.unitary_modulus.update(worst, tag);
    }

    // Isolated real eigenvalues must give Hermitian eigenoperators once
    // the phase is fixed.
    for (Eigen::Index j = 0; j < spec.eigenvalues.size(); ++j) {
        const Complex q = spec.eigenvalues(j);
        if (std::abs(q.imag()) > 1e-8) continue;
        double sep = std::numeric_limits<double>::infinity();
        for (Eigen::Index k = 0; k < spec.eigenvalues.size(); ++k) {
            if (k != j) sep = std::min(sep, std::abs(spec.eigenvalues(k) - q));
        }
        if (sep < 1e-6) continue;
        const Matrix& rho = spec.eigenoperators[static_cast<std::size_t>(j)];
        mm.real_eig_herm.update((rho - rho.adjoint()).norm(), tag);
        ++mm.real_eig_samples;
    }

    if (check_ness && model != nullptr && cfg != nullptr) {
        try {
            const Ness ness = extract_ness(spec, uf, *model, *cfg, sopts);
            mm.ness_herm.update(hermiticity_defect(ness.rho0), tag);
            mm.ness_trace.update(std::abs(ness.rho0.trace() - Complex(1.0, 0.0)), tag);
            mm.ness_negativity.update(-min_eigenvalue(ness.rho0), tag);
            mm.ness_residual.update(ness.fixed_point_residual, tag);
        } catch (const Error&) {
            mm.ness_herm.update(std::numeric_limits<double>::infinity(), tag + " (extraction failed)");
        }
    }

    // Stroboscopic convergence to the non-decaying projection.
    if (initial_states > 0) {
        double q2 = 0.0;
        for (Eigen::Index j = 0; j < spec.eigenvalues.size(); ++j) {
            if (spec.classes[static_cast<std::size_t>(j)] == SpectralClass::transient) {
                q2 = std::max(q2, std::abs(spec.eigenvalues(j)));
            }
        }
        if (q2 > 0.0 && q2 < 1.0) {
            const long m = static_cast<long>(std::ceil(std::log(1e-8) / std::log(q2)));
            const Matrix um = matrix_power(uf.mat, m);
            RngStream rng(state_seed);
            for (int s = 0; s < initial_states; ++s) {
                const Matrix rho_init = random_physical_density(rng, uf.dim_hilbert);
                const NondecayingProjection proj = nondecaying_projection(spec, uf, rho_init);
                const Matrix target = nondecaying_state(spec, proj, m);
                const Matrix evolved = devectorize(um * vectorize(rho_init), uf.dim_hilbert,
                                                   uf.dim_hilbert);
                mm.convergence.update((evolved - target).norm(), tag);
                ++mm.convergence_samples;
            }
        }
    }
}

} // namespace detail

// Runs the spectral theorem checks over a seeded random ensemble. Extra
// maps (a test hook) are screened through the same spectrum checks; a
// non-CPTP injection shows up as a modulus-bound or diagonalizability failure.
inline VerifyReport run_theorem_suite(const EnsembleOptions& opts,
                                      const std::vector<Superoperator>& injected = {})
{
    VerifyReport report;
    report.seed = opts.seed;
    report.driven_models = opts.models;
    report.static_models = opts.static_models;
    report.unitary_models = opts.unitary_models;

    struct Task {
        LindbladModel model;
        std::string tag;
        bool unitary = false;
        std::uint64_t state_seed = 0;
    };

    // Generate the whole ensemble up front so results do not depend on
    // scheduling.
    std::vector<Task> tasks;
    RngStream rng(opts.seed);
    const int dims[3] = {2, 3, 4};
    for (int i = 0; i < opts.models; ++i) {
        RandomModelOptions mo;
        mo.n_harmonics = 1 + (i % 2); // alternate single- and two-harmonic drives
        mo.n_jumps = rng.integer(1, 3);
        Task task;
        task.model = make_random_model(rng, dims[i % 3], mo);
        task.tag = "driven[" + std::to_string(i) + "]";
        task.state_seed = opts.seed ^ (0x9e3779b97f4a7c15ull + static_cast<std::uint64_t>(i));
        tasks.push_back(std::move(task));
    }
    for (int i = 0; i < opts.static_models; ++i) {
        RandomModelOptions mo;
        mo.n_harmonics = 0;
        mo.n_jumps = rng.integer(1, 3);
        Task task;
        task.model = make_random_model(rng, dims[i % 3], mo);
        task.tag = "static[" + std::to_string(i) + "]";
        task.state_seed = opts.seed ^ (0xbf58476d1ce4e5b9ull + static_cast<std::uint64_t>(i));
        tasks.push_back(std::move(task));
    }
    for (int i = 0; i < opts.unitary_models; ++i) {
        RandomModelOptions mo;
        mo.n_harmonics = 1;
        mo.n_jumps = 0;
        Task task;
        task.model = make_random_model(rng, dims[i % 3], mo);
        task.tag = "unitary[" + std::to_string(i) + "]";
        task.unitary = true;
        task.state_seed = 0;
        tasks.push_back(std::move(task));
    }

    std::vector<detail::ModelMargins> margins(tasks.size() + injected.size());
    parallel_for(tasks.size(), [&](std::size_t i) {
        const Task& task = tasks[i];
        PropagatorConfig cfg;
        cfg.slices_per_period = opts.slices_per_period;
        const Superoperator uf = floquet_operator(task.model, cfg);
        detail::run_spectrum_checks(uf, task.tag, task.unitary, /*check_ness=*/true, &task.model,
                                    &cfg, opts.spectral,
                                    task.unitary ? 0 : opts.initial_states, task.state_seed,
                                    margins[i]);
    });
    for (std::size_t i = 0; i < injected.size(); ++i) {
        detail::run_spectrum_checks(injected[i], "injected[" + std::to_string(i) + "]", false,
                                    /*check_ness=*/false, nullptr, nullptr, opts.spectral, 0, 0,
                                    margins[tasks.size() + i]);
    }

    detail::ModelMargins total;
    for (const auto& mm : margins) {
        auto merge = [](detail::Margin& dst, const detail::Margin& src) {
            if (src.value > dst.value) dst = src;
        };
        merge(total.pairing, mm.pairing);
        merge(total.pair_residual, mm.pair_residual);
        merge(total.traceless, mm.traceless);
        merge(total.modulus, mm.modulus);
        merge(total.steady_dist, mm.steady_dist);
        merge(total.jordan_flags, mm.jordan_flags);
        merge(total.ness_herm, mm.ness_herm);
        merge(total.ness_trace, mm.ness_trace);
        merge(total.ness_negativity, mm.ness_negativity);
        merge(total.ness_residual, mm.ness_residual);
        merge(total.convergence, mm.convergence);
        merge(total.real_eig_herm, mm.real_eig_herm);
        merge(total.unitary_modulus, mm.unitary_modulus);
        total.convergence_samples += mm.convergence_samples;
        total.real_eig_samples += mm.real_eig_samples;
    }

    const int all = static_cast<int>(tasks.size() + injected.size());
    auto add = [&](const std::string& name, int samples, const detail::Margin& m,
                   double threshold) {
        CheckResult c;
        c.name = name;
        c.samples = samples;
        c.worst = m.value;
        c.threshold = threshold;
        c.pass = m.value <= threshold;
        c.worst_at = m.at;
        report.checks.push_back(std::move(c));
    };

    add("spectrum closed under conjugation", all, total.pairing, 1e-8);
    add("adjoint eigenpair residual", all, total.pair_residual, 1e-8);
    add("non-steady eigenoperators traceless", all, total.traceless, 1e-8);
    add("unit-disk modulus bound (|q| - 1)", all, total.modulus, 1e-8);
    add("unit eigenvalue exists (min |q - 1|)", all, total.steady_dist, 1e-7);
    add("unit-circle clusters diagonalizable (deficiency flags)", all, total.jordan_flags, 0.0);
    add("physical NESS hermiticity", all - static_cast<int>(injected.size()), total.ness_herm,
        1e-10);
    add("physical NESS trace", all - static_cast<int>(injected.size()), total.ness_trace,
        1e-10);
    add("physical NESS negativity", all - static_cast<int>(injected.size()),
        total.ness_negativity, 1e-8);
    add("physical NESS fixed-point residual", all - static_cast<int>(injected.size()),
        total.ness_residual, 1e-7);
    add("Stroboscopic convergence to non-decaying projection", total.convergence_samples,
        total.convergence, 1e-6);
    add("isolated real eigenvalues give Hermitian eigenoperators", total.real_eig_samples,
        total.real_eig_herm, 1e-9);
    add("Unitary sub-ensemble: all moduli on unit circle", opts.unitary_models,
        total.unitary_modulus, 1e-8);
    return report;
}

} // namespace floq
