#pragma once

#include <array>
#include <vector>

#include "chemowave/model.hpp"
#include "chemowave/scalar_maps.hpp"

namespace chemowave {

struct OrbitOptions {
    double eps0_rel = 1e-8;    // initial offset = eps0_rel * p0 along the unstable eigenvector
    double rk_tol = 1e-11;     // adaptive RK relative tolerance
    double p_stop = 1e-60;     // terminate when p <= p_stop
    double xi_span_max = 400;  // hard cap on integration length
    double max_step = 0.05;    // node spacing cap for the Hermite resampler
};

/// Adaptive-step output of the shooting integrator. xi is relative to the
/// integration start; the phase convention is applied in assemble().
struct RawOrbit {
    std::vector<double> xi;
    std::vector<double> p;
    std::vector<double> q;
    double xi_start_offset = 0.0;  // xi of the start node in phase-fixed coordinates
    double dp_start = 0.0;         // initial offset components (p0,0) + (dp,dq)
    double dq_start = 0.0;
};

/// The heteroclinic orbit resampled on a uniform grid, with the assembled
/// wave components and measured asymptotic constants. Phase convention:
/// p(0) = p0/2.
struct WaveProfile {
    std::vector<double> xi;
    std::vector<double> p_star, q_star;
    std::vector<double> u_star, v_star;
    std::vector<double> u_prime, u_double_prime;
    std::vector<double> v_prime, v_double_prime;
    std::vector<double> log_p;  // exact log of p_star (tail-safe)
    double S1_hat = 0, S2_hat = 0, S3_hat = 0;
    double xi_shift = 0;  // shift applied to the raw orbit coordinate
    double dx = 0;

    /// log v_star = a*xi + log p_star; exact in the tails.
    double log_v(size_t i, double a) const { return a * xi[i] + log_p[i]; }
};

struct RateFit {
    std::string quantity;
    std::string side;  // "left" or "right"
    double fitted = 0;
    double target = 0;
};

/// Unit direction of the unstable manifold of (p0, 0), oriented so the orbit
/// leaves with p decreasing and q < 0.
std::array<double, 2> unstable_direction(const DerivedQuantities& dq,
                                         const ScalarMaps& maps);

/// Shoots off the unstable manifold with an adaptive embedded Runge-Kutta
/// (Dormand-Prince 5(4)). Throws on span excess or monotonicity violation.
RawOrbit shoot(const DerivedQuantities& dq, const ScalarMaps& maps,
               const OrbitOptions& opts);

/// Resamples the orbit onto [xi_min, xi_max] with n points (quintic Hermite
/// from the integrator nodes; linearized-manifold extension left of the start
/// node) and assembles u*, v* and derivatives via the closed forms.
WaveProfile assemble(const RawOrbit& raw, const DerivedQuantities& dq,
                     const ScalarMaps& maps, double xi_min, double xi_max, size_t n);

/// Sup-norm residuals of the reduced ODE (r1) and the travelling-wave
/// v-equation (r2), 4th-order centered differences on the interior.
std::array<double, 2> residual(const WaveProfile& profile, const ModelParams& params,
                               const DerivedQuantities& dq, const ScalarMaps& maps);

/// Log-linear tail fits of the decay rates against the analytic targets.
/// Requires >= 10 e-foldings of decay over each tail.
std::vector<RateFit> measure_rates(const WaveProfile& profile,
                                   const DerivedQuantities& dq,
                                   const ModelParams& params);

}  // namespace chemowave
