#pragma once

#include <string>
#include <vector>

namespace chemowave {

/// Nonlinear perturbation d(u) of the species diffusion k(u) = alpha + d(u).
/// Restricted to three closed-form families so that the primitive
/// D(u) = int_0^u d(tau)/tau dtau stays exactly evaluable.
struct DiffusionPerturbation {
    enum class Family { Zero, Linear, Quadratic };

    Family family = Family::Zero;
    double coefficient = 0.0;  // beta >= 0

    double d(double u) const {
        switch (family) {
            case Family::Zero: return 0.0;
            case Family::Linear: return coefficient * u;
            case Family::Quadratic: return coefficient * u * u;
        }
        return 0.0;
    }
    double d_prime(double u) const {
        switch (family) {
            case Family::Zero: return 0.0;
            case Family::Linear: return coefficient;
            case Family::Quadratic: return 2.0 * coefficient * u;
        }
        return 0.0;
    }
    double d_double_prime(double) const {
        return family == Family::Quadratic ? 2.0 * coefficient : 0.0;
    }
    /// Primitive D(u); D(0) = 0 for every family.
    double D(double u) const {
        switch (family) {
            case Family::Zero: return 0.0;
            case Family::Linear: return coefficient * u;
            case Family::Quadratic: return 0.5 * coefficient * u * u;
        }
        return 0.0;
    }
};

struct ModelParams {
    double alpha = 1.0;  // minimal species diffusion
    double chi = 1.0;    // sensitivity strength
    double gamma = 1.0;  // chemical growth
    double l = 1.0;      // consumption rate
    double c = 3.0;      // wave speed
    DiffusionPerturbation d;
};

/// Closed-form constants derived from the model parameters.
struct DerivedQuantities {
    double a = 0;         // c/chi
    double mu = 0;        // 2a + c
    double nu = 0;        // a^2 + a c + gamma
    double kappa_plus = 0;
    double kappa_minus = 0;
    double p0 = 0;        // nonzero rest state of the reduced scalar equation
    double u_minus = 0;   // left limit of the u-front, nu/l
    double lambda_unstable = 0;  // unstable eigenvalue of the planar system at (p0, 0)
    double f_prime_p0 = 0;
    double J_lo = 0;  // -(a + kappa_plus)
    double J_hi = 0;  // -(chi/alpha) kappa_plus
    double Ju_lo = 0; // open lower endpoint of the instability sub-interval
};

/// Checks positivity of all coefficients and the existence condition
/// c^2 > 4 gamma. Returns the list of violated constraints, empty if
/// the parameters are admissible.
std::vector<std::string> validate(const ModelParams& params);

/// Fills all closed-form derived quantities. Throws std::invalid_argument
/// if validate(params) is nonempty.
DerivedQuantities derive(const ModelParams& params);

/// Wave-speed restriction guaranteeing the weight-rate interval J has
/// nonempty interior. No restriction when chi > alpha - 2.
bool check_R1(const ModelParams& params);

/// True iff the configured right-end weight rate admits unstable spectral
/// values: chi > alpha - 2, the upper wave-speed bound when alpha > 1, and
/// w_plus inside (Ju_lo, J_hi].
bool check_R2(const ModelParams& params, double w_plus);

}  // namespace chemowave
