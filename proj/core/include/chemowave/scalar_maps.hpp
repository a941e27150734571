#pragma once

#include "chemowave/model.hpp"

namespace chemowave {

/// Scalar substitution machinery: G(u) = alpha log u + D(u), its inverse,
/// the KPP nonlinearity f and the remainder g with f(p) + g(p) = nu p.
class ScalarMaps {
  public:
    struct Options {
        double newton_tol = 1e-13;
        int newton_max_iter = 60;
    };

    explicit ScalarMaps(const ModelParams& params) : ScalarMaps(params, Options{}) {}
    ScalarMaps(const ModelParams& params, Options opts);

    const ModelParams& params() const { return params_; }
    double nu() const { return nu_; }

    /// G(u) = alpha log u + D(u), strictly increasing on (0, inf).
    double G(double u) const;
    /// Inverse of G. Exact exponential for the Zero family, otherwise
    /// safeguarded Newton seeded at exp(y/alpha).
    double G_inverse(double y) const;
    /// (G^-1)'(y) = G^-1(y) / (alpha + d(G^-1(y))).
    double G_inverse_prime(double y) const;

    /// KPP nonlinearity, extended by f(0) = 0.
    double f(double p) const;
    /// f'(p), with f'(0) = nu by the continuous extension.
    double f_prime(double p) const;
    /// Remainder g(p) = l p G^-1(chi log|p|), g(0) = 0.
    double g(double p) const;

  private:
    ModelParams params_;
    Options opts_;
    double nu_;
};

}  // namespace chemowave
