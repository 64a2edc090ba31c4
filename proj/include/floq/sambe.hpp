// sambe.hpp — Shirley-Floquet solvers on the truncated extended space:
// the closed-system quasi-energy problem and the Floquet-Lindblad eigenmode
// problem in explicit-harmonic form, plus the RWA 2x2 reduction.

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "floq/common.hpp"
#include "floq/linalg.hpp"
#include "floq/model.hpp"
#include "floq/superop.hpp"

namespace floq {

enum class SambeMode { full, rwa };

struct SambeConfig {
    int cutoff = 6;           // harmonics -L..L retained
    SambeMode mode = SambeMode::full;
    double edge_weight_max = 0.01; // outermost-block weight above this marks an
                                   // eigenvector as unconverged (truncation edge)
};

struct SfHamiltonian {
    Matrix mat;      // (2L+1)N x (2L+1)N, or 2x2 in rwa mode
    double omega = 0.0;
    int cutoff = 0;
    int dim_hilbert = 0;
};

namespace detail {

inline Matrix h_component(const LindbladModel& model, int l)
{
    auto it = model.h_fourier.find(l);
    if (it != model.h_fourier.end()) return it->second;
    return Matrix::Zero(model.dim, model.dim);
}

inline void require_cutoff_covers(const LindbladModel& model, int cutoff)
{
    int max_h = 0;
    for (const auto& [l, h] : model.h_fourier) {
        if (h.norm() > 0.0) max_h = std::max(max_h, std::abs(l));
    }
    if (cutoff < max_h) {
        throw ConfigError("Sambe cutoff " + std::to_string(cutoff) +
                          " is below the model's harmonic content " + std::to_string(max_h));
    }
}

} // namespace detail

// RWA 2x2 block of the Shirley-Floquet Hamiltonian:
// [[h^(0)_11 + Omega, h^(-1)_12], [h^(1)_21, h^(0)_22]].
inline Matrix rwa_sf_block(const LindbladModel& model)
{
    if (model.dim != 2) {
        throw ConfigError("RWA reduction requires a two-level model, got dim " +
                          std::to_string(model.dim));
    }
    const Matrix h0 = detail::h_component(model, 0);
    const Matrix hm = detail::h_component(model, -1);
    const Matrix hp = detail::h_component(model, 1);
    Matrix out(2, 2);
    out << h0(0, 0) + model.omega, hm(0, 1), hp(1, 0), h0(1, 1);
    return out;
}

// Truncated Shirley-Floquet Hamiltonian. Block rows/cols are ordered by
// harmonic index l = -L..L; block (l, l') = h^{(l-l')} - l Omega delta_{ll'} I.
inline SfHamiltonian build_sf_hamiltonian(const LindbladModel& model, const SambeConfig& cfg)
{
    require_valid(model);
    if (cfg.mode == SambeMode::rwa) {
        return SfHamiltonian{rwa_sf_block(model), model.omega, 0, model.dim};
    }
    if (cfg.cutoff < 0) throw ConfigError("Sambe cutoff must be nonnegative");
    detail::require_cutoff_covers(model, cfg.cutoff);

    const int N = model.dim;
    const int L = cfg.cutoff;
    const int blocks = 2 * L + 1;
    Matrix mat = Matrix::Zero(blocks * N, blocks * N);
    for (int r = 0; r < blocks; ++r) {
        const int l = r - L;
        for (int c = 0; c < blocks; ++c) {
            const int lp = c - L;
            auto it = model.h_fourier.find(l - lp);
            if (it != model.h_fourier.end()) {
                mat.block(r * N, c * N, N, N) = it->second;
            }
        }
        mat.block(r * N, r * N, N, N) -= l * model.omega * Matrix::Identity(N, N);
    }
    return SfHamiltonian{std::move(mat), model.omega, L, N};
}

struct SfModes {
    Eigen::VectorXd energies;          // quasi-energies, ascending
    Matrix vectors;                    // coefficient columns a_j
    std::vector<double> edge_weights;  // weight on the outermost harmonic blocks
    std::vector<bool> interior;        // edge weight below the convergence cut
    std::vector<int> ladder_center;    // harmonic block carrying the most weight

    std::vector<double> interior_energies() const
    {
        std::vector<double> out;
        for (Eigen::Index j = 0; j < energies.size(); ++j) {
            if (interior[static_cast<std::size_t>(j)]) out.push_back(energies(j));
        }
        return out;
    }

    // Modes whose replica ladder is centered at least `margin` blocks away
    // from the truncation edge; these carry the smallest truncation error.
    std::vector<Eigen::Index> deep_interior(int cutoff, int margin) const
    {
        std::vector<Eigen::Index> out;
        for (Eigen::Index j = 0; j < energies.size(); ++j) {
            if (std::abs(ladder_center[static_cast<std::size_t>(j)]) <= cutoff - margin) {
                out.push_back(j);
            }
        }
        return out;
    }
};

// Eigenpairs of the Gamma-free (closed-system) Shirley-Floquet matrix;
// within the interior of the truncation window the replica structure
// eps_j + l Omega is visible.
inline SfModes sf_quasienergies(const SfHamiltonian& sf, double edge_weight_max = 0.01)
{
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sf.mat);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("sf_quasienergies: eigensolver failed to converge");
    }
    SfModes modes;
    modes.energies = solver.eigenvalues();
    modes.vectors = solver.eigenvectors();

    const int N = sf.dim_hilbert;
    const Eigen::Index dim = sf.mat.rows();
    for (Eigen::Index j = 0; j < dim; ++j) {
        double w = 0.0;
        if (sf.cutoff > 0) {
            w = modes.vectors.col(j).head(N).squaredNorm() +
                modes.vectors.col(j).tail(N).squaredNorm();
        }
        modes.edge_weights.push_back(w);
        modes.interior.push_back(w < edge_weight_max);

        int center = 0;
        double center_weight = -1.0;
        for (int r = 0; r < 2 * sf.cutoff + 1; ++r) {
            const double bw = modes.vectors.col(j).segment(static_cast<Eigen::Index>(r) * N, N)
                                  .squaredNorm();
            if (bw > center_weight) {
                center_weight = bw;
                center = r - sf.cutoff;
            }
        }
        modes.ladder_center.push_back(center);
    }
    return modes;
}

struct SfEigenmode {
    Complex lambda;
    std::map<int, Matrix> blocks; // l -> varrho^{(l)}
    double edge_weight = 0.0;
    bool converged = false;
};

// varrho_j(t) = sum_l varrho^{(l)} e^{-i l Omega t}.
inline Matrix reconstruct_eigenmode(const SfEigenmode& mode, double omega, double t)
{
    Matrix out;
    bool first = true;
    for (const auto& [l, block] : mode.blocks) {
        const Complex phase = std::exp(Complex(0.0, -l * omega * t));
        if (first) {
            out = phase * block;
            first = false;
        } else {
            out += phase * block;
        }
    }
    return out;
}

// Explicit-harmonic Floquet-Lindblad eigenmode problem: for each retained
// harmonic l,
//   -i sum_{l'} [h^{(l-l')}, rho^{(l')}] + i l Omega rho^{(l)}
//     + sum_mu Gamma_mu D[L_mu] rho^{(l)} = lambda rho^{(l)},
// assembled as one (2L+1)N^2 eigenproblem over the stacked blocks.
inline std::vector<SfEigenmode> solve_sf_lindblad(const LindbladModel& model,
                                                  const SambeConfig& cfg)
{
    require_valid(model);
    if (!model.has_static_jumps()) {
        throw ConfigError("time-periodic jump operators are not supported in the Sambe solver; "
                          "use the time-domain propagator/spectral path");
    }
    if (cfg.cutoff < 0) throw ConfigError("Sambe cutoff must be nonnegative");
    detail::require_cutoff_covers(model, cfg.cutoff);

    const int N = model.dim;
    const int L = cfg.cutoff;
    const int blocks = 2 * L + 1;
    const int nn = N * N;
    const Eigen::Index dim = static_cast<Eigen::Index>(blocks) * nn;

    Matrix diss = Matrix::Zero(nn, nn);
    for (const auto& jump : model.jumps) diss += dissipator_superop(jump.op, jump.rate);

    Matrix M = Matrix::Zero(dim, dim);
    for (int r = 0; r < blocks; ++r) {
        const int l = r - L;
        for (int c = 0; c < blocks; ++c) {
            const int lp = c - L;
            auto it = model.h_fourier.find(l - lp);
            if (it != model.h_fourier.end()) {
                M.block(r * nn, c * nn, nn, nn) += commutator_superop(it->second);
            }
        }
        M.block(r * nn, r * nn, nn, nn) +=
            Complex(0.0, l * model.omega) * Matrix::Identity(nn, nn) + diss;
    }

    EigenDecomposition dec = eig_general(M);
    std::vector<SfEigenmode> modes;
    modes.reserve(static_cast<std::size_t>(dim));
    for (Eigen::Index j = 0; j < dim; ++j) {
        SfEigenmode mode;
        mode.lambda = dec.eigenvalues(j);
        const Vector& col = dec.right_eigenvectors.col(j);
        double edge = 0.0;
        for (int r = 0; r < blocks; ++r) {
            const Vector seg = col.segment(static_cast<Eigen::Index>(r) * nn, nn);
            mode.blocks[r - L] = devectorize(seg, N, N);
            if (L > 0 && (r == 0 || r == blocks - 1)) edge += seg.squaredNorm();
        }
        mode.edge_weight = edge; // columns are unit norm
        mode.converged = edge < cfg.edge_weight_max;

        // Phase convention mirrors the spectral module: anchor on the
        // central block's leading diagonal entry.
        Complex anchor{0.0, 0.0};
        const Matrix& central = mode.blocks[0];
        for (int d = 0; d < N; ++d) {
            if (std::abs(central(d, d)) > std::abs(anchor)) anchor = central(d, d);
        }
        if (std::abs(anchor) < 1e-9) {
            for (const auto& [l, blk] : mode.blocks) {
                for (Eigen::Index r2 = 0; r2 < blk.rows(); ++r2) {
                    for (Eigen::Index c2 = 0; c2 < blk.cols(); ++c2) {
                        if (std::abs(blk(r2, c2)) > std::abs(anchor)) anchor = blk(r2, c2);
                    }
                }
            }
        }
        if (std::abs(anchor) > 0.0) {
            const Complex phase = std::conj(anchor / std::abs(anchor));
            for (auto& [l, blk] : mode.blocks) blk *= phase;
        }
        modes.push_back(std::move(mode));
    }

    std::sort(modes.begin(), modes.end(), [](const SfEigenmode& a, const SfEigenmode& b) {
        if (a.lambda.real() != b.lambda.real()) return a.lambda.real() > b.lambda.real();
        return a.lambda.imag() < b.lambda.imag();
    });
    return modes;
}

// The lambda ~ 0 eigenmode normalized so that Tr varrho^{(0)} = 1; this is
// the Sambe-side NESS, with varrho(t) = sum_l varrho^{(l)} e^{-i l Omega t}.
inline SfEigenmode sf_ness(const LindbladModel& model, const SambeConfig& cfg)
{
    std::vector<SfEigenmode> modes = solve_sf_lindblad(model, cfg);
    const SfEigenmode* best = nullptr;
    double best_dist = std::numeric_limits<double>::infinity();
    for (const SfEigenmode& m : modes) {
        const double dist = std::abs(m.lambda);
        if (dist < best_dist) {
            best_dist = dist;
            best = &m;
        }
    }
    if (best == nullptr) throw NumericalError("sf_ness: no eigenmodes returned");
    SfEigenmode ness = *best;
    const Complex tr = ness.blocks.at(0).trace();
    if (std::abs(tr) < 1e-10) {
        throw IntegrityError("sf_ness: lambda ~ 0 eigenmode has traceless central block");
    }
    for (auto& [l, blk] : ness.blocks) blk /= tr;
    return ness;
}

// Reduced RWA problem: the 2x2 Shirley-Floquet block plus the equivalent
// static Lindblad model whose eigenmode problem it defines. The reduced
// unknowns sit in the 2x2 arrangement
// [[rho_11^{(0)}, rho_12^{(-1)}], [rho_21^{(1)}, rho_22^{(0)}]].
struct RwaReduced {
    Matrix h_sf_rwa;          // 2x2
    LindbladModel effective;  // static model: H = h_sf_rwa, jumps carried over
};

inline RwaReduced rwa_reduce(const LindbladModel& model)
{
    require_valid(model);
    if (model.dim != 2) {
        throw ConfigError("rwa_reduce: unsupported dimension " + std::to_string(model.dim) +
                          "; the RWA reduction is defined for two-level models");
    }
    for (const auto& [l, h] : model.h_fourier) {
        if (std::abs(l) > 1 && h.norm() > 0.0) {
            throw ConfigError("rwa_reduce: model has harmonic content beyond |l| = 1");
        }
    }
    if (!model.has_static_jumps()) {
        throw ConfigError("rwa_reduce: requires static jump operators");
    }

    RwaReduced red;
    red.h_sf_rwa = rwa_sf_block(model);
    red.effective.dim = 2;
    red.effective.omega = model.omega;
    red.effective.h_fourier[0] = red.h_sf_rwa;
    red.effective.jumps = model.jumps;
    return red;
}

} // namespace floq
