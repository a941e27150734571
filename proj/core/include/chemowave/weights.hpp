#pragma once

#include <span>

#include "chemowave/model.hpp"

namespace chemowave {

/// Value and first two derivatives of a weight at one point.
struct WeightJet {
    double value = 1.0;
    double first = 0.0;
    double second = 0.0;
};

/// Smooth exponential weights eta_minus, eta_plus and eta = eta_minus*eta_plus.
/// Each weight is exp(rate * blend(xi)) with a C^2 quintic-Hermite exponent
/// blend, so it is >= 1 everywhere, identically 1 on one half-line, and a pure
/// exponential outside [-1, 1].
class WeightSpec {
  public:
    /// w_minus is fixed to -c/chi; w_plus must lie in [J_lo, J_hi].
    WeightSpec(const ModelParams& params, const DerivedQuantities& dq, double w_plus);

    double w_minus() const { return w_minus_; }
    double w_plus() const { return w_plus_; }

    double eta_minus(double xi) const;
    double eta_plus(double xi) const;
    double eta(double xi) const;

    WeightJet eta_minus_jet(double xi) const;
    WeightJet eta_plus_jet(double xi) const;
    WeightJet eta_jet(double xi) const;

    /// log eta_plus(xi) = w_plus * blend(xi); exact, no overflow.
    double log_eta_plus(double xi) const;
    double log_eta_minus(double xi) const;
    double log_eta(double xi) const { return log_eta_minus(xi) + log_eta_plus(xi); }

    /// (value, d/dxi, d2/dxi2) of the log-weights; what the analytic weight
    /// conjugation of differential operators consumes.
    struct LogJet {
        double value, d1, d2;
    };
    LogJet log_eta_plus_jet(double xi) const;
    LogJet log_eta_minus_jet(double xi) const;
    LogJet log_eta_log_jet(double xi) const;

    /// Discrete weighted sup-norms on a sampled grid.
    double norm_X1(std::span<const double> xi, std::span<const double> x) const;
    double norm_X2(std::span<const double> xi, std::span<const double> y) const;
    double norm_D1(std::span<const double> xi, std::span<const double> x,
                   std::span<const double> xp, std::span<const double> xpp) const;
    double norm_D2(std::span<const double> xi, std::span<const double> y,
                   std::span<const double> yp, std::span<const double> ypp) const;

    /// Gauge form of the X2 norm for fields stored as v = e^{a xi} p:
    /// sup eta * e^{a xi} * |p|, evaluated without overflow.
    double norm_X2_gauge(std::span<const double> xi, std::span<const double> p) const;

    /// min over the grid of eta * v with v = e^{a xi} p; the simulator's
    /// singularity guard.
    double min_weighted_v_gauge(std::span<const double> xi,
                                std::span<const double> p) const;

    /// log(eta(xi)) + a*xi; the gauge amplification factor in log form.
    double log_eta_exp_a(double xi) const { return log_eta(xi) + a_ * xi; }

  private:
    double w_minus_;
    double w_plus_;
    double a_;
};

}  // namespace chemowave
