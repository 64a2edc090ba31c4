// propagator.hpp — Time-ordered evolution superoperator U(t, t0) and the
// one-period Floquet-Lindblad evolution superoperator U_F.

#pragma once

#include <cmath>
#include <string>
#include <utility>

#include <Eigen/SVD>

#include "floq/common.hpp"
#include "floq/linalg.hpp"
#include "floq/model.hpp"
#include "floq/superop.hpp"

namespace floq {

enum class SliceScheme { midpoint_frozen, endpoint_frozen };

struct PropagatorConfig {
    int slices_per_period = 512;
    SliceScheme scheme = SliceScheme::midpoint_frozen;
    double t0 = 0.0; // U_F depends on t0; always explicit
};

// Ordered product of per-slice exponentials exp(L(t_s) dt). Each factor is
// a Lindblad-generated semigroup element, so every slice is exactly CPTP;
// the midpoint scheme is second order in dt.
inline Superoperator propagate(const LindbladModel& model, const PropagatorConfig& cfg,
                               double t0, double t)
{
    require_valid(model);
    if (cfg.slices_per_period < 1) {
        throw ConfigError("propagate: slices_per_period must be >= 1");
    }
    if (t < t0) {
        throw DomainError("propagate: t < t0 (" + std::to_string(t) + " < " +
                          std::to_string(t0) + ")");
    }
    const int n = model.dim;
    if (t == t0) return identity_superop(n);

    const double span = t - t0;
    const double dt_nominal = model.period() / cfg.slices_per_period;
    // Nudge keeps propagate(t0, t0 + k*dt_nominal) at exactly k slices so
    // that aligned compositions multiply the same factors.
    const long slices = std::max<long>(1, static_cast<long>(std::ceil(span / dt_nominal - 1e-9)));
    const double dt = span / static_cast<double>(slices);

    Matrix u = Matrix::Identity(n * n, n * n);
    for (long s = 0; s < slices; ++s) {
        const double t_frozen = (cfg.scheme == SliceScheme::midpoint_frozen)
                                    ? t0 + (static_cast<double>(s) + 0.5) * dt
                                    : t0 + static_cast<double>(s + 1) * dt;
        u = expm(build_liouvillian(model, t_frozen).mat * dt) * u;
    }
    return Superoperator{n, std::move(u), SuperopKind::map};
}

// U_F = U(t0 + T, t0), the stroboscopic one-period map.
inline Superoperator floquet_operator(const LindbladModel& model, const PropagatorConfig& cfg)
{
    return propagate(model, cfg, cfg.t0, cfg.t0 + model.period());
}

// Split t - t0 = m T + tau with tau in [0, T).
inline std::pair<long, double> stroboscopic_split(double t0, double period, double t)
{
    if (!(period > 0.0)) throw DomainError("stroboscopic_split: period must be positive");
    if (t < t0) throw DomainError("stroboscopic_split: t < t0");
    const double span = t - t0;
    long m = static_cast<long>(std::floor(span / period));
    double tau = span - static_cast<double>(m) * period;
    if (tau < 0.0) {
        m -= 1;
        tau = span - static_cast<double>(m) * period;
    }
    if (tau >= period || period - tau <= 1e-12 * period) {
        m += 1;
        tau = span - static_cast<double>(m) * period;
        if (tau < 0.0) tau = 0.0;
    }
    return {m, tau};
}

// Step-size error estimate: operator-norm difference against a run with
// doubled slices.
inline double richardson_check(const LindbladModel& model, const PropagatorConfig& cfg,
                               double t0, double t)
{
    Superoperator coarse = propagate(model, cfg, t0, t);
    PropagatorConfig fine_cfg = cfg;
    fine_cfg.slices_per_period = 2 * cfg.slices_per_period;
    Superoperator fine = propagate(model, fine_cfg, t0, t);
    Eigen::JacobiSVD<Matrix> svd(coarse.mat - fine.mat);
    return svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
}

} // namespace floq
