#pragma once

#include <cstddef>
#include <vector>

#include "chemowave/wave.hpp"
#include "chemowave/weights.hpp"

namespace chemowave {

/// Uniform truncated grid of the moving-frame simulation.
struct Grid {
    double L_minus = -30.0;
    double L_plus = 40.0;
    size_t N = 8192;
    double dx = 0.0;

    static Grid make(double L_minus, double L_plus, size_t N);
};

struct SimOptions {
    double cfl = 0.4;
    double p_floor = 1e-280;
};

struct PerturbationSpec {
    enum class Kind { GaussianWeighted, FourierWindowed };
    Kind kind = Kind::FourierWindowed;
    double amplitude = 1e-6;
    double center = 15.0;
    double width = 5.0;
    double carrier_h = 0.0;
};

struct NormSample {
    double t = 0;
    double norm_X = 0;
    double norm_D = 0;
    double min_weighted_v = 0;
};

struct NormTrace {
    std::vector<NormSample> samples;
};

/// Method-of-lines integrator for the moving-frame system in the (u, p)
/// gauge. The state holds the deviation (x, r) = (u - u*, p - p*) from the
/// computed wave; the right-hand side is the algebraically expanded
/// difference of the total-field fluxes, so the unperturbed wave is an
/// exact (bitwise) steady state of the scheme.
class Simulator {
  public:
    struct State {
        double t = 0;
        std::vector<double> x;  // deviation of u
        std::vector<double> r;  // deviation of the gauge field p (v = e^{a xi} p)
    };

    /// profile must be assembled on [grid.L_minus, grid.L_plus] with grid.N
    /// points.
    Simulator(const ModelParams& params, const DerivedQuantities& dq,
              const WaveProfile& profile, const WeightSpec& weights,
              const Grid& grid, SimOptions opts = {});

    const Grid& grid() const { return grid_; }
    const std::vector<double>& xi() const { return xi_; }
    const WeightSpec& weights() const { return weights_; }
    /// Unweighted C^2 magnitude of the wave in the (u, p) gauge; the
    /// saturation reference of the growth-window fit.
    double wave_ref_norm() const { return wave_ref_; }

    State initial_state() const;

    /// Adds the D-normalized perturbation of Thm 2.7 type:
    /// y0 = amplitude * eta^{-1} * envelope * cos(carrier_h * xi) in the
    /// v-variable, converted to the p-gauge. ||(x0,y0)||_D == amplitude.
    void perturb(State& state, const PerturbationSpec& spec) const;

    /// Expanded deviation right-hand side; exactly zero at (x, r) = (0, 0).
    void rhs(const State& state, std::vector<double>& xdot,
             std::vector<double>& rdot) const;

    /// Total-field right-hand side u_dot = (k(u)u')' - chi (u p'/p)',
    /// p_dot = p'' + mu p' + p (nu - l u); diagnostic/validation path.
    void rhs_total(const std::vector<double>& u, const std::vector<double>& p,
                   std::vector<double>& udot, std::vector<double>& pdot) const;

    /// Diffusion-limited step bound cfl * dx^2 / max(sup k(u), 1).
    double max_dt(const State& state) const;

    /// One explicit RK4 step; throws "CFL violated" if dt exceeds max_dt.
    void step(State& state, double dt) const;

    /// Advances to time t_end with uniform sub-steps within the CFL bound.
    void advance(State& state, double t_end) const;

    NormSample norms(const State& state) const;

    std::vector<double> total_u(const State& state) const;
    std::vector<double> total_p(const State& state) const;

  private:
    void guard(const std::vector<double>& x, const std::vector<double>& r) const;
    void rhs_into(const std::vector<double>& x, const std::vector<double>& r,
                  std::vector<double>& xdot, std::vector<double>& rdot) const;

    ModelParams params_;
    DerivedQuantities dq_;
    WeightSpec weights_;
    Grid grid_;
    SimOptions opts_;
    std::vector<double> xi_;
    std::vector<double> us_, ps_;          // wave samples
    std::vector<double> usm_, psm_;        // interface midpoint values
    std::vector<double> dus_, dps_;        // interface differences / dx
    std::vector<double> rp_;               // dps / psm (bounded log-slope)
    std::vector<double> wfac_;             // eta * e^{a xi} (weight in gauge)
    std::vector<double> etap_;             // eta_plus
    double wave_ref_ = 0;
    // Step scratch; a Simulator instance is confined to one run at a time.
    mutable std::vector<double> dflux_, tx_, tr_, k1x_, k1r_, k2x_, k2r_, k3x_, k3r_,
        k4x_, k4r_;
};

struct InstabilityResult {
    NormTrace trace;
    bool window_found = false;
    double fitted_rate = 0;
    double predicted_rate = 0;
    double A0 = 0;
};

/// Perturbs, evolves to time T recording every record_dt, and fits the
/// exponential growth of norm_D over the window
/// [10 A0, sat_frac * wave_ref_norm].
InstabilityResult run_instability(const Simulator& sim, const PerturbationSpec& spec,
                                  double T, double record_dt, double predicted_rate,
                                  double sat_frac = 1e-3);

struct EscapeResult {
    std::vector<std::pair<int, double>> log;  // (n, norm_D after n applications)
    bool escaped = false;
    int n_escape = -1;
};

/// Iterates the time-one flow map from D-norm amplitude A0 until the norm
/// reaches epsilon0 or n_max iterations.
EscapeResult time_one_map_escape(const Simulator& sim, const PerturbationSpec& spec,
                                 double epsilon0, int n_max);

}  // namespace chemowave
