#include "chemowave/weights.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace chemowave {

namespace {

// Quintic exponent blend: phi(s) = 0 for s <= 0, s for s >= 1, and
// 6s^3 - 8s^4 + 3s^5 in between (value/slope/curvature match at both ends).
// phi and phi' are nonnegative on [0, 1].
struct BlendJet {
    double value, first, second;
};

BlendJet blend(double s) {
    if (s <= 0.0) return {0.0, 0.0, 0.0};
    if (s >= 1.0) return {s, 1.0, 0.0};
    const double s2 = s * s, s3 = s2 * s;
    return {s3 * (6.0 - 8.0 * s + 3.0 * s2),
            s2 * (18.0 - 32.0 * s + 15.0 * s2),
            s * (36.0 - 96.0 * s + 60.0 * s2)};
}

WeightJet exp_jet(double rate, const BlendJet& b) {
    // eta = exp(rate*phi): eta' = rate*phi' * eta, eta'' = (rate*phi'' + (rate*phi')^2) * eta.
    const double e = std::exp(rate * b.value);
    const double rp = rate * b.first;
    return {e, rp * e, (rate * b.second + rp * rp) * e};
}

}  // namespace

WeightSpec::WeightSpec(const ModelParams& params, const DerivedQuantities& dq,
                       double w_plus)
    : w_minus_(-params.c / params.chi), w_plus_(w_plus), a_(dq.a) {
    const double slack = 1e-14 * std::max(1.0, std::abs(dq.J_hi));
    if (!(w_plus >= dq.J_lo - slack && w_plus <= dq.J_hi + slack))
        throw std::invalid_argument("w_plus outside J");
}

double WeightSpec::log_eta_plus(double xi) const {
    if (xi <= 0.0) return 0.0;
    if (xi >= 1.0) return w_plus_ * xi;
    return w_plus_ * blend(xi).value;
}

double WeightSpec::log_eta_minus(double xi) const {
    if (xi >= 0.0) return 0.0;
    if (xi <= -1.0) return w_minus_ * xi;
    return -w_minus_ * blend(-xi).value;
}

double WeightSpec::eta_plus(double xi) const {
    if (xi <= 0.0) return 1.0;
    return std::exp(log_eta_plus(xi));
}

double WeightSpec::eta_minus(double xi) const {
    if (xi >= 0.0) return 1.0;
    return std::exp(log_eta_minus(xi));
}

double WeightSpec::eta(double xi) const { return eta_minus(xi) * eta_plus(xi); }

WeightJet WeightSpec::eta_plus_jet(double xi) const {
    return exp_jet(w_plus_, blend(xi));
}

WeightJet WeightSpec::eta_minus_jet(double xi) const {
    // eta_minus(xi) = exp(-w_minus * phi(-xi)); chain rule flips odd derivatives.
    BlendJet b = blend(-xi);
    WeightJet j = exp_jet(-w_minus_, b);
    j.first = -j.first;
    return j;
}

WeightJet WeightSpec::eta_jet(double xi) const {
    const WeightJet m = eta_minus_jet(xi);
    const WeightJet p = eta_plus_jet(xi);
    return {m.value * p.value,
            m.first * p.value + m.value * p.first,
            m.second * p.value + 2.0 * m.first * p.first + m.value * p.second};
}

WeightSpec::LogJet WeightSpec::log_eta_plus_jet(double xi) const {
    const BlendJet b = blend(xi);
    return {w_plus_ * b.value, w_plus_ * b.first, w_plus_ * b.second};
}

WeightSpec::LogJet WeightSpec::log_eta_minus_jet(double xi) const {
    // log eta_minus(xi) = -w_minus * phi(-xi); chain rule flips odd derivatives.
    const BlendJet b = blend(-xi);
    return {-w_minus_ * b.value, w_minus_ * b.first, -w_minus_ * b.second};
}

WeightSpec::LogJet WeightSpec::log_eta_log_jet(double xi) const {
    const LogJet p = log_eta_plus_jet(xi);
    const LogJet m = log_eta_minus_jet(xi);
    return {p.value + m.value, p.d1 + m.d1, p.d2 + m.d2};
}

double WeightSpec::norm_X1(std::span<const double> xi, std::span<const double> x) const {
    double s = 0.0;
    for (size_t i = 0; i < xi.size(); ++i)
        s = std::max(s, eta_plus(xi[i]) * std::abs(x[i]));
    return s;
}

double WeightSpec::norm_X2(std::span<const double> xi, std::span<const double> y) const {
    double s = 0.0;
    for (size_t i = 0; i < xi.size(); ++i)
        s = std::max(s, eta(xi[i]) * std::abs(y[i]));
    return s;
}

double WeightSpec::norm_D1(std::span<const double> xi, std::span<const double> x,
                           std::span<const double> xp,
                           std::span<const double> xpp) const {
    return norm_X1(xi, x) + norm_X1(xi, xp) + norm_X1(xi, xpp);
}

double WeightSpec::norm_D2(std::span<const double> xi, std::span<const double> y,
                           std::span<const double> yp,
                           std::span<const double> ypp) const {
    return norm_X2(xi, y) + norm_X2(xi, yp) + norm_X2(xi, ypp);
}

double WeightSpec::norm_X2_gauge(std::span<const double> xi,
                                 std::span<const double> p) const {
    double s = 0.0;
    for (size_t i = 0; i < xi.size(); ++i) {
        if (p[i] == 0.0) continue;
        s = std::max(s, std::exp(log_eta_exp_a(xi[i]) + std::log(std::abs(p[i]))));
    }
    return s;
}

double WeightSpec::min_weighted_v_gauge(std::span<const double> xi,
                                        std::span<const double> p) const {
    double m = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < xi.size(); ++i) {
        double w;
        if (p[i] > 0.0)
            w = std::exp(log_eta_exp_a(xi[i]) + std::log(p[i]));
        else if (p[i] < 0.0)
            w = -std::exp(log_eta_exp_a(xi[i]) + std::log(-p[i]));
        else
            w = 0.0;
        m = std::min(m, w);
    }
    return m;
}

}  // namespace chemowave
