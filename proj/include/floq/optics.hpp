// optics.hpp — Two-band RWA application: per-momentum steady states via
// G-matrix inversion, shift current (DC) and SHG response, k-grid sums.

#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "floq/common.hpp"
#include "floq/model.hpp"

namespace floq {

struct KPoint {
    double k = 0.0;
    double weight = 0.0;
    double eps1 = 0.0;  // valence band energy
    double eps2 = 0.0;  // conduction band energy
    Matrix v0;          // 2x2 velocity matrix, Hermitian
    Matrix dv_dk;       // 2x2 directional derivative of v0
};

struct TwoBandModel {
    std::vector<KPoint> k_grid;
    Complex amplitude{0.0, 0.0}; // A = E / Omega
    double omega = 0.0;
    double gamma0 = 0.0; // bath coupling
    double beta = std::numeric_limits<double>::infinity(); // inverse bath temperature
    bool include_higher_order_coupling = false; // reserved; linear coupling only
};

// Uniform Brillouin-zone average weights.
inline void assign_uniform_weights(TwoBandModel& model)
{
    if (model.k_grid.empty()) return;
    const double w = 1.0 / static_cast<double>(model.k_grid.size());
    for (auto& kp : model.k_grid) kp.weight = w;
}

inline ValidationReport validate_two_band(const TwoBandModel& model)
{
    ValidationReport report;
    auto bad = [&](const std::string& msg) { report.violations.push_back(msg); };
    if (model.k_grid.empty()) bad("k_grid is empty");
    if (!(model.omega > 0.0)) bad("omega must be positive");
    if (!(model.gamma0 > 0.0)) bad("gamma0 must be positive");
    if (!(model.beta > 0.0)) bad("beta must be positive (may be infinite)");
    if (model.include_higher_order_coupling) {
        bad("include_higher_order_coupling is reserved and not implemented; "
            "only linear coupling H(t) = H0 + A(t) V0 is supported");
    }
    for (std::size_t i = 0; i < model.k_grid.size(); ++i) {
        const KPoint& kp = model.k_grid[i];
        const std::string at = "k point " + std::to_string(i) + " (k = " + std::to_string(kp.k) + "): ";
        if (!(kp.eps2 > kp.eps1)) bad(at + "band gap is not positive (insulator required)");
        if (kp.v0.rows() != 2 || kp.v0.cols() != 2) {
            bad(at + "v0 must be 2x2");
        } else if (hermiticity_defect(kp.v0) > 1e-10) {
            bad(at + "v0 is not Hermitian");
        }
        if (kp.dv_dk.rows() != 2 || kp.dv_dk.cols() != 2) {
            bad(at + "dv_dk must be 2x2");
        } else if (hermiticity_defect(kp.dv_dk) > 1e-10) {
            bad(at + "dv_dk is not Hermitian");
        }
        if (model.beta != std::numeric_limits<double>::infinity() &&
            model.beta * (kp.eps2 - kp.eps1) < 1e-12) {
            bad(at + "beta * gap below 1e-12; Planck occupation diverges");
        }
    }
    return report;
}

inline void require_valid(const TwoBandModel& model)
{
    ValidationReport report = validate_two_band(model);
    if (!report.ok()) throw ValidationError("invalid two-band model:\n" + report.str());
}

// Bose occupation of the bath mode at the band gap.
inline double planck_occupation(double beta, double energy_gap)
{
    if (!(energy_gap > 0.0)) {
        throw DomainError("planck_occupation: energy gap must be positive");
    }
    if (beta == std::numeric_limits<double>::infinity()) return 0.0;
    if (!(beta > 0.0)) throw DomainError("planck_occupation: beta must be positive or infinite");
    const double x = beta * energy_gap;
    if (x < 1e-12) {
        throw DomainError("planck_occupation: beta * gap = " + std::to_string(x) +
                          " below 1e-12; occupation diverges");
    }
    return 1.0 / std::expm1(x);
}

// Real parameterization of the RWA Shirley-Floquet block, eps I + d.sigma,
// plus the photonic-bath rates.
struct RwaBlochData {
    double epsilon = 0.0;
    Eigen::Vector3d d = Eigen::Vector3d::Zero();
    double gamma1 = 0.0; // emission
    double gamma2 = 0.0; // absorption

    double gamma() const { return gamma1 + gamma2; }
    double gamma0_eff() const { return gamma1 - gamma2; }
};

inline RwaBlochData rwa_bloch_data(const TwoBandModel& model, const KPoint& kp)
{
    const double gap = kp.eps2 - kp.eps1;
    if (!(gap > 0.0)) throw DomainError("rwa_bloch_data: band gap must be positive");
    RwaBlochData data;
    data.epsilon = 0.5 * (kp.eps1 + model.omega + kp.eps2);
    data.d(2) = 0.5 * (kp.eps1 + model.omega - kp.eps2);
    // h_21 = i A v0_21 = d_x + i d_y
    const Complex h21 = I_UNIT * model.amplitude * kp.v0(1, 0);
    data.d(0) = h21.real();
    data.d(1) = h21.imag();
    const double n_occ = planck_occupation(model.beta, gap);
    data.gamma1 = model.gamma0 * (n_occ + 1.0);
    data.gamma2 = model.gamma0 * n_occ;
    return data;
}

// Steady Bloch vector <sigma>_ss = -G^{-1} b with
// G = [[-g/2, -2dz, 2dy], [2dz, -g/2, -2dx], [-2dy, 2dx, -g]], b = (0, 0, g0).
inline Eigen::Vector3d solve_rwa_steady(const RwaBlochData& data)
{
    const double g = data.gamma();
    if (!(g > 0.0)) {
        throw DomainError("solve_rwa_steady: gamma = 0 makes G singular (degenerate steady "
                          "space); use the general spectral solver instead");
    }
    const double dx = data.d(0), dy = data.d(1), dz = data.d(2);
    Eigen::Matrix3d G;
    G << -0.5 * g, -2.0 * dz, 2.0 * dy,
         2.0 * dz, -0.5 * g, -2.0 * dx,
         -2.0 * dy, 2.0 * dx, -g;
    const Eigen::Vector3d b(0.0, 0.0, data.gamma0_eff());
    return G.partialPivLu().solve(-b);
}

// Density matrix 1/2 (I + s.sigma).
inline Matrix density_from_bloch(const Eigen::Vector3d& s)
{
    Matrix rho(2, 2);
    rho << Complex(0.5 * (1.0 + s(2)), 0.0), Complex(0.5 * s(0), -0.5 * s(1)),
           Complex(0.5 * s(0), 0.5 * s(1)), Complex(0.5 * (1.0 - s(2)), 0.0);
    return rho;
}

// RWA current block v^RWA = b0 I + b.sigma, assembled from the band
// velocities and the field-dressed off-diagonals.
struct VelocityBlock {
    double b0 = 0.0;
    Eigen::Vector3d b = Eigen::Vector3d::Zero();
};

inline VelocityBlock velocity_rwa_block(const TwoBandModel& model, const KPoint& kp)
{
    const Complex off12 = -I_UNIT * std::conj(model.amplitude) * kp.dv_dk(0, 1);
    const Complex off21 = I_UNIT * model.amplitude * kp.dv_dk(1, 0);
    if (std::abs(std::conj(off12) - off21) > 1e-10) {
        throw ValidationError("velocity_rwa_block: assembled v^RWA is not Hermitian; "
                              "dv_dk data is inconsistent");
    }
    VelocityBlock vb;
    vb.b0 = 0.5 * std::real(kp.v0(0, 0) + kp.v0(1, 1));
    vb.b(2) = 0.5 * std::real(kp.v0(0, 0) - kp.v0(1, 1));
    vb.b(0) = off21.real();
    vb.b(1) = off21.imag();
    return vb;
}

inline Matrix velocity_rwa_matrix(const VelocityBlock& vb)
{
    Matrix v(2, 2);
    v << Complex(vb.b0 + vb.b(2), 0.0), Complex(vb.b(0), -vb.b(1)),
         Complex(vb.b(0), vb.b(1)), Complex(vb.b0 - vb.b(2), 0.0);
    return v;
}

// DC (shift-current) contribution of one momentum sector.
inline double j_dc(const TwoBandModel& model, const KPoint& kp)
{
    const RwaBlochData data = rwa_bloch_data(model, kp);
    const Eigen::Vector3d s = solve_rwa_steady(data);
    const VelocityBlock vb = velocity_rwa_block(model, kp);
    return vb.b0 + vb.b.dot(s);
}

// Complex amplitude c(k) of the e^{-2 i Omega t} SHG component; the real
// signal is c e^{-2i Omega t} + conj(c) e^{+2i Omega t}.
inline Complex j_shg(const TwoBandModel& model, const KPoint& kp)
{
    const RwaBlochData data = rwa_bloch_data(model, kp);
    const Eigen::Vector3d s = solve_rwa_steady(data);
    const Complex rho21_1 = Complex(0.5 * s(0), 0.5 * s(1));
    return I_UNIT * model.amplitude * kp.dv_dk(0, 1) * rho21_1;
}

// Linear (frequency Omega) response amplitude; computed for validation,
// exported only on request.
inline Complex j_linear(const TwoBandModel& model, const KPoint& kp)
{
    const RwaBlochData data = rwa_bloch_data(model, kp);
    const Eigen::Vector3d s = solve_rwa_steady(data);
    const Complex rho21_1 = Complex(0.5 * s(0), 0.5 * s(1));
    const double rho11 = 0.5 * (1.0 + s(2));
    const double rho22 = 0.5 * (1.0 - s(2));
    return I_UNIT * model.amplitude *
               (kp.dv_dk(0, 0) * rho11 + kp.dv_dk(1, 1) * rho22) +
           kp.v0(0, 1) * rho21_1;
}

// Static effective Lindblad model of one momentum sector: H = h_SF^RWA,
// jumps sigma+/sigma- at the photonic-bath rates. Its NESS is the
// G-matrix steady state; keystone cross-check target for the general
// spectral and Sambe solvers.
inline LindbladModel rwa_effective_model(const TwoBandModel& model, const KPoint& kp)
{
    const RwaBlochData data = rwa_bloch_data(model, kp);
    Matrix h(2, 2);
    h << Complex(data.epsilon + data.d(2), 0.0), Complex(data.d(0), -data.d(1)),
         Complex(data.d(0), data.d(1)), Complex(data.epsilon - data.d(2), 0.0);
    LindbladModel eff;
    eff.dim = 2;
    eff.omega = model.omega;
    eff.h_fourier[0] = h;
    eff.jumps.push_back(Jump{sigma_plus(), data.gamma1, {}});
    eff.jumps.push_back(Jump{sigma_minus(), data.gamma2, {}});
    return eff;
}

// Full lab-frame driven model of one momentum sector (linear coupling):
// h^{(0)} = diag(eps1, eps2), h^{(1)} = i A v0, h^{(-1)} = -i A* v0.
inline LindbladModel lab_frame_model(const TwoBandModel& model, const KPoint& kp)
{
    const double gap = kp.eps2 - kp.eps1;
    const double n_occ = planck_occupation(model.beta, gap);
    LindbladModel lab;
    lab.dim = 2;
    lab.omega = model.omega;
    Matrix h0 = Matrix::Zero(2, 2);
    h0(0, 0) = kp.eps1;
    h0(1, 1) = kp.eps2;
    lab.h_fourier[0] = h0;
    lab.h_fourier[1] = I_UNIT * model.amplitude * kp.v0;
    lab.h_fourier[-1] = -I_UNIT * std::conj(model.amplitude) * kp.v0;
    lab.jumps.push_back(Jump{sigma_plus(), model.gamma0 * (n_occ + 1.0), {}});
    lab.jumps.push_back(Jump{sigma_minus(), model.gamma0 * n_occ, {}});
    return lab;
}

struct OpticalResponse {
    struct PerK {
        double k = 0.0;
        Eigen::Vector3d sigma_ss = Eigen::Vector3d::Zero();
        double j_dc = 0.0;
        Complex j_shg{0.0, 0.0};
        Complex j_linear{0.0, 0.0};
    };
    std::vector<PerK> per_k;
    double total_dc = 0.0;
    Complex total_shg{0.0, 0.0};
    Complex total_linear{0.0, 0.0};
};

// Per-k responses plus weighted totals. Per-k work runs in parallel;
// aggregation is an ordered pairwise reduction, so output is deterministic.
inline OpticalResponse sweep(const TwoBandModel& model)
{
    require_valid(model);
    const std::size_t n = model.k_grid.size();
    OpticalResponse resp;
    resp.per_k.resize(n);
    std::vector<std::string> errors(n);

    parallel_for(n, [&](std::size_t i) {
        try {
            const KPoint& kp = model.k_grid[i];
            const RwaBlochData data = rwa_bloch_data(model, kp);
            const Eigen::Vector3d s = solve_rwa_steady(data);
            const VelocityBlock vb = velocity_rwa_block(model, kp);
            const Complex rho21_1 = Complex(0.5 * s(0), 0.5 * s(1));
            const double rho11 = 0.5 * (1.0 + s(2));
            const double rho22 = 0.5 * (1.0 - s(2));

            OpticalResponse::PerK& out = resp.per_k[i];
            out.k = kp.k;
            out.sigma_ss = s;
            out.j_dc = vb.b0 + vb.b.dot(s);
            out.j_shg = I_UNIT * model.amplitude * kp.dv_dk(0, 1) * rho21_1;
            out.j_linear = I_UNIT * model.amplitude *
                               (kp.dv_dk(0, 0) * rho11 + kp.dv_dk(1, 1) * rho22) +
                           kp.v0(0, 1) * rho21_1;
        } catch (const Error& e) {
            errors[i] = e.what();
        }
    });

    for (std::size_t i = 0; i < n; ++i) {
        if (!errors[i].empty()) {
            throw NumericalError("sweep failed at k point " + std::to_string(i) + " (k = " +
                                 std::to_string(model.k_grid[i].k) + "): " + errors[i]);
        }
    }

    std::vector<double> dc_terms(n);
    std::vector<Complex> shg_terms(n), lin_terms(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double w = model.k_grid[i].weight;
        dc_terms[i] = w * resp.per_k[i].j_dc;
        shg_terms[i] = w * resp.per_k[i].j_shg;
        lin_terms[i] = w * resp.per_k[i].j_linear;
    }
    resp.total_dc = pairwise_sum(dc_terms);
    resp.total_shg = pairwise_sum(shg_terms);
    resp.total_linear = pairwise_sum(lin_terms);
    return resp;
}

} // namespace floq
