// model.hpp — Declarative time-periodic Lindblad model: Hamiltonian Fourier
// components plus jump operators, with validation.

#pragma once

#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "floq/common.hpp"

namespace floq {

// One dissipation channel. `op` is the static (l = 0) part; a channel may
// optionally carry extra Fourier components in op_harmonics (key l != 0),
// giving L_mu(t) = op + sum_l op_harmonics[l] e^{-i l Omega t}. The Sambe
// solver accepts static channels only.
struct Jump {
    Matrix op;
    double rate = 0.0;
    std::map<int, Matrix> op_harmonics;

    bool is_static() const { return op_harmonics.empty(); }
};

struct LindbladModel {
    int dim = 0;       // Hilbert-space dimension N
    double omega = 0.0; // drive angular frequency Omega (hbar = 1)
    std::map<int, Matrix> h_fourier; // l -> h^{(l)}, H(t) = sum_l h^{(l)} e^{-i l Omega t}
    std::vector<Jump> jumps;

    double period() const { return 2.0 * std::numbers::pi / omega; }

    int max_harmonic() const
    {
        int m = 0;
        for (const auto& [l, h] : h_fourier) m = std::max(m, std::abs(l));
        for (const auto& j : jumps) {
            for (const auto& [l, op] : j.op_harmonics) m = std::max(m, std::abs(l));
        }
        return m;
    }

    bool is_static() const
    {
        for (const auto& [l, h] : h_fourier) {
            if (l != 0 && h.norm() > 0.0) return false;
        }
        for (const auto& j : jumps) {
            if (!j.is_static()) return false;
        }
        return true;
    }

    bool has_static_jumps() const
    {
        for (const auto& j : jumps) {
            if (!j.is_static()) return false;
        }
        return true;
    }
};

inline Matrix hamiltonian_at(const LindbladModel& model, double t)
{
    Matrix h = Matrix::Zero(model.dim, model.dim);
    for (const auto& [l, hl] : model.h_fourier) {
        h += hl * std::exp(Complex(0.0, -l * model.omega * t));
    }
    return h;
}

inline Matrix jump_at(const LindbladModel& model, const Jump& jump, double t)
{
    if (jump.is_static()) return jump.op;
    Matrix op = jump.op;
    for (const auto& [l, opl] : jump.op_harmonics) {
        op += opl * std::exp(Complex(0.0, -l * model.omega * t));
    }
    return op;
}

struct ValidationReport {
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }

    std::string str() const
    {
        std::string s;
        for (const auto& v : violations) {
            s += v;
            s += '\n';
        }
        return s;
    }
};

// Lists every violated model invariant; an empty report means the model
// generates a CPTP map.
inline ValidationReport validate(const LindbladModel& model, double herm_tol = 1e-12)
{
    ValidationReport report;
    auto bad = [&](const std::string& msg) { report.violations.push_back(msg); };

    if (model.dim < 1) bad("dim must be a positive integer, got " + std::to_string(model.dim));
    if (!(model.omega > 0.0)) {
        bad("omega must be positive (period T = 2*pi/omega), got " + std::to_string(model.omega));
    }
    if (model.dim < 1 || !(model.omega > 0.0)) return report;

    for (const auto& [l, h] : model.h_fourier) {
        if (h.rows() != model.dim || h.cols() != model.dim) {
            bad("h_fourier[" + std::to_string(l) + "] is " + std::to_string(h.rows()) + "x" +
                std::to_string(h.cols()) + ", expected " + std::to_string(model.dim) + "x" +
                std::to_string(model.dim));
            continue;
        }
        if (!is_finite(h)) {
            bad("h_fourier[" + std::to_string(l) + "] has non-finite entries");
            continue;
        }
        // Hermiticity of H(t) as a whole: h^{(-l)} must equal h^{(l)}^dag.
        auto partner = model.h_fourier.find(-l);
        if (partner == model.h_fourier.end()) {
            if (h.norm() > herm_tol) {
                bad("h_fourier[" + std::to_string(l) + "] present but h_fourier[" +
                    std::to_string(-l) + "] missing; H(t) not Hermitian");
            }
        } else if (partner->second.rows() == model.dim && partner->second.cols() == model.dim) {
            const double defect = (partner->second - h.adjoint()).norm();
            const double scale = std::max(1.0, h.norm());
            if (defect > herm_tol * scale) {
                bad("h_fourier[" + std::to_string(-l) + "] != h_fourier[" + std::to_string(l) +
                    "]^dag (defect " + std::to_string(defect) + "); H(t) not Hermitian");
            }
        }
    }

    for (std::size_t mu = 0; mu < model.jumps.size(); ++mu) {
        const Jump& j = model.jumps[mu];
        if (j.rate < 0.0) {
            bad("jump " + std::to_string(mu) + ": negative rate " + std::to_string(j.rate));
        }
        if (j.op.rows() != model.dim || j.op.cols() != model.dim) {
            bad("jump " + std::to_string(mu) + ": operator is " + std::to_string(j.op.rows()) +
                "x" + std::to_string(j.op.cols()) + ", expected " + std::to_string(model.dim) +
                "x" + std::to_string(model.dim));
        } else if (!is_finite(j.op)) {
            bad("jump " + std::to_string(mu) + ": operator has non-finite entries");
        }
        for (const auto& [l, opl] : j.op_harmonics) {
            if (l == 0) bad("jump " + std::to_string(mu) + ": harmonic 0 must live in `op`");
            if (opl.rows() != model.dim || opl.cols() != model.dim) {
                bad("jump " + std::to_string(mu) + ": harmonic " + std::to_string(l) +
                    " has wrong shape");
            }
        }
    }
    return report;
}

inline void require_valid(const LindbladModel& model)
{
    ValidationReport report = validate(model);
    if (!report.ok()) throw ValidationError("invalid Lindblad model:\n" + report.str());
}

// Physicality checks for density matrices ("flagged physical" contract).
inline std::vector<std::string> physicality_violations(const Matrix& rho, double herm_tol = 1e-10,
                                                       double trace_tol = 1e-10,
                                                       double psd_tol = 1e-8)
{
    std::vector<std::string> v;
    if (rho.rows() != rho.cols()) {
        v.push_back("not square");
        return v;
    }
    const double hd = hermiticity_defect(rho);
    if (hd > herm_tol) v.push_back("Hermiticity defect " + std::to_string(hd));
    const double td = std::abs(rho.trace() - Complex(1.0, 0.0));
    if (td > trace_tol) v.push_back("trace deviates from 1 by " + std::to_string(td));
    const double mineig = min_eigenvalue(rho);
    if (mineig < -psd_tol) v.push_back("minimum eigenvalue " + std::to_string(mineig));
    return v;
}

inline bool is_physical(const Matrix& rho, double herm_tol = 1e-10, double trace_tol = 1e-10,
                        double psd_tol = 1e-8)
{
    return physicality_violations(rho, herm_tol, trace_tol, psd_tol).empty();
}

} // namespace floq
