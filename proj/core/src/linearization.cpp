#include "chemowave/linearization.hpp"

#include <cmath>
#include <stdexcept>

namespace chemowave {

namespace {

// Second-order finite-difference derivatives of a sampled field (centered in
// the interior, one-sided at the ends). Used only for base perturbations;
// the wave itself carries analytic derivatives.
void fd_derivatives(const std::vector<double>& f, double dx, std::vector<double>& d1,
                    std::vector<double>& d2) {
    const size_t n = f.size();
    d1.assign(n, 0.0);
    d2.assign(n, 0.0);
    if (n < 3) throw std::invalid_argument("grid too small for derivatives");
    for (size_t i = 1; i + 1 < n; ++i) {
        d1[i] = (f[i + 1] - f[i - 1]) / (2.0 * dx);
        d2[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / (dx * dx);
    }
    d1[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dx);
    d1[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * dx);
    d2[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / (dx * dx);
    d2[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / (dx * dx);
}

}  // namespace

LinearizationCoefficients coefficients(const WaveProfile& profile,
                                       const ModelParams& params,
                                       const DerivedQuantities& dq,
                                       const std::optional<BasePerturbation>& base,
                                       const WeightSpec& weights) {
    const size_t n = profile.xi.size();
    const double chi = params.chi, alpha = params.alpha, c = params.c;
    const double gamma = params.gamma, l = params.l, a = dq.a, mu = dq.mu;

    if (base) {
        if (base->x.size() != n || base->y.size() != n)
            throw std::invalid_argument("base perturbation size mismatch");
        // Singularity guard: the weighted chemical concentration must stay
        // positive for the linearization to make sense.
        for (size_t i = 0; i < n; ++i) {
            const double ev = std::exp(weights.log_eta(profile.xi[i]) + a * profile.xi[i]);
            if (!(ev * profile.p_star[i] + std::exp(weights.log_eta(profile.xi[i])) * base->y[i] > 0.0))
                throw std::domain_error("singularity guard: eta*(v+y) not positive");
        }
    }

    std::vector<double> xd1, xd2, yd1, yd2;
    if (base) {
        fd_derivatives(base->x, profile.dx, xd1, xd2);
        fd_derivatives(base->y, profile.dx, yd1, yd2);
    }

    ScalarMaps maps(params, {});

    LinearizationCoefficients out;
    out.xi = profile.xi;
    out.a1.resize(n);
    out.a2.resize(n);
    out.a3.resize(n);
    out.a4.resize(n);
    out.a5.resize(n);
    out.a6.resize(n);
    out.a7.resize(n);
    out.a8.resize(n);
    out.a4_em.resize(n);
    out.a5_em.resize(n);
    out.a6_em.resize(n);
    out.a7_em.resize(n);

    for (size_t i = 0; i < n; ++i) {
        const double xi = profile.xi[i];
        const double p = profile.p_star[i];
        const double q = profile.q_star[i];

        double u = profile.u_star[i];
        double up = profile.u_prime[i];
        double upp = profile.u_double_prime[i];
        // Gauge-safe ratios of the wave's v component: v = e^{a xi} p.
        double vr1 = a + q / p;                                            // v'/v
        double vr2 = (a * a * p + (2.0 * a - mu) * q - maps.f(p)) / p;     // v''/v
        double inv_v = std::exp(-a * xi) / p;                              // 1/v
        // 1/(v eta_minus): bounded on both tails.
        double inv_v_em = std::exp(-(a * xi + weights.log_eta_minus(xi))) / p;
        // v * eta_minus: bounded companion of v on the left tail.
        double v_em = p * std::exp(a * xi + weights.log_eta_minus(xi));
        double v = p * std::exp(a * xi);

        if (base) {
            u += base->x[i];
            up += xd1[i];
            upp += xd2[i];
            const double vt = v + base->y[i];
            const double vtp = profile.v_prime[i] + yd1[i];
            const double vtpp = profile.v_double_prime[i] + yd2[i];
            vr1 = vtp / vt;
            vr2 = vtpp / vt;
            inv_v = 1.0 / vt;
            const double em = std::exp(weights.log_eta_minus(xi));
            inv_v_em = 1.0 / (v_em + em * base->y[i]);
            v_em = v_em + em * base->y[i];
            v = vt;
        }

        const double du = params.d.d(u);
        const double dpu = params.d.d_prime(u);
        const double dppu = params.d.d_double_prime(u);

        out.a1[i] = alpha + du;
        out.a2[i] = c + 2.0 * up * dpu - chi * vr1;
        out.a3[i] = dpu * upp + dppu * up * up - chi * vr2 + chi * vr1 * vr1;

        // a4, a5, a6 share a single 1/v factor beyond bounded ratios; the
        // _em companions replace it by 1/(v eta_minus).
        const double b4 = -chi * u;
        const double b5 = -chi * (up - 2.0 * u * vr1);
        const double b6 = -chi * (u * (2.0 * vr1 * vr1 - vr2) - up * vr1);
        out.a4[i] = b4 * inv_v;
        out.a5[i] = b5 * inv_v;
        out.a6[i] = b6 * inv_v;
        out.a4_em[i] = b4 * inv_v_em;
        out.a5_em[i] = b5 * inv_v_em;
        out.a6_em[i] = b6 * inv_v_em;

        out.a7[i] = -l * v;
        out.a7_em[i] = -l * v_em;  // eta_minus * a7, bounded on the left
        out.a8[i] = gamma - l * u;
    }

    const double disc = std::sqrt(c * c - 4.0 * gamma);
    out.a_plus_limits = {alpha, c + 0.5 * chi * (c - disc), 0.0, 0.0,
                         0.0,   0.0,                        0.0, gamma};
    out.drift_c = c;
    return out;
}

ConjugatedOperator::ConjugatedOperator(const LinearizationCoefficients& coeffs,
                                       const WeightSpec& weights, double dx)
    : n_(coeffs.xi.size()), dx_(dx), xi_(coeffs.xi) {
    c2_11_.resize(n_);
    c1_11_.resize(n_);
    c0_11_.resize(n_);
    c2_12_.resize(n_);
    c1_12_.resize(n_);
    c0_12_.resize(n_);
    c0_21_.resize(n_);
    c2_22_.resize(n_);
    c1_22_.resize(n_);
    c0_22_.resize(n_);

    for (size_t i = 0; i < n_; ++i) {
        const double xi = xi_[i];
        // sigma L sigma^{-1} = A d2 + (B + 2 A g1) d1 + (C + B g1 + A g2)
        // with g1 = -(log sigma)' and g2 = (log sigma)'^2 - (log sigma)''.
        const auto jp = weights.log_eta_plus_jet(xi);
        const auto je = weights.log_eta_log_jet(xi);
        const double g1p = -jp.d1, g2p = jp.d1 * jp.d1 - jp.d2;
        const double g1e = -je.d1, g2e = je.d1 * je.d1 - je.d2;

        // Block 11: eta_plus (a1 d2 + a2 d1 + a3) eta_plus^{-1}.
        c2_11_[i] = coeffs.a1[i];
        c1_11_[i] = coeffs.a2[i] + 2.0 * coeffs.a1[i] * g1p;
        c0_11_[i] = coeffs.a3[i] + coeffs.a2[i] * g1p + coeffs.a1[i] * g2p;

        // Block 12: eta_plus (a4 d2 + a5 d1 + a6) eta^{-1}
        //         = eta_minus^{-1} * (conjugation of L2 by eta); the
        //         eta_minus^{-1} factor is folded into the _em coefficients.
        c2_12_[i] = coeffs.a4_em[i];
        c1_12_[i] = coeffs.a5_em[i] + 2.0 * coeffs.a4_em[i] * g1e;
        c0_12_[i] = coeffs.a6_em[i] + coeffs.a5_em[i] * g1e + coeffs.a4_em[i] * g2e;

        // Block 21: eta a7 eta_plus^{-1} = eta_minus a7.
        c0_21_[i] = coeffs.a7_em[i];

        // Block 22: eta (d2 + c d1 + a8) eta^{-1}.
        const double c = coeffs.drift_c;
        c2_22_[i] = 1.0;
        c1_22_[i] = c + 2.0 * g1e;
        c0_22_[i] = coeffs.a8[i] + c * g1e + g2e;
    }
}

void ConjugatedOperator::apply(std::span<const Complex> z1, std::span<const Complex> z2,
                               std::span<Complex> out1, std::span<Complex> out2) const {
    if (z1.size() != n_ || z2.size() != n_ || out1.size() != n_ || out2.size() != n_)
        throw std::invalid_argument("operator/grid size mismatch");
    const double h2 = dx_ * dx_;
    // Dirichlet rows: identity.
    out1[0] = z1[0];
    out2[0] = z2[0];
    out1[n_ - 1] = z1[n_ - 1];
    out2[n_ - 1] = z2[n_ - 1];
    for (size_t i = 1; i + 1 < n_; ++i) {
        const Complex d1z1 = (z1[i + 1] - z1[i - 1]) / (2.0 * dx_);
        const Complex d2z1 = (z1[i + 1] - 2.0 * z1[i] + z1[i - 1]) / h2;
        const Complex d1z2 = (z2[i + 1] - z2[i - 1]) / (2.0 * dx_);
        const Complex d2z2 = (z2[i + 1] - 2.0 * z2[i] + z2[i - 1]) / h2;
        out1[i] = c2_11_[i] * d2z1 + c1_11_[i] * d1z1 + c0_11_[i] * z1[i] +
                  c2_12_[i] * d2z2 + c1_12_[i] * d1z2 + c0_12_[i] * z2[i];
        out2[i] = c0_21_[i] * z1[i] + c2_22_[i] * d2z2 + c1_22_[i] * d1z2 +
                  c0_22_[i] * z2[i];
    }
}

double weyl_residual(const ConjugatedOperator& op, std::complex<double> lambda,
                     double h, double center, double width) {
    using Complex = std::complex<double>;
    const auto& xi = op.xi();
    const size_t n = op.grid_size();
    if (n < 8) throw std::invalid_argument("grid too small");
    const double lo = center - 0.5 * width, hi = center + 0.5 * width;
    if (lo <= xi.front() + 2.0 * op.dx() || hi >= xi.back() - 2.0 * op.dx())
        throw std::invalid_argument("window outside grid");

    std::vector<Complex> z1(n, Complex(0.0)), z2(n), o1(n), o2(n);
    for (size_t i = 0; i < n; ++i) {
        const double s = (xi[i] - center) / (0.5 * width);
        const double bump = std::abs(s) < 1.0 ? std::pow(1.0 - s * s, 3) : 0.0;
        z2[i] = bump * Complex(std::cos(h * xi[i]), std::sin(h * xi[i]));
    }
    op.apply(z1, z2, o1, o2);
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < n; ++i) {
        num = std::max(num, std::abs(o1[i] - lambda * z1[i]));
        num = std::max(num, std::abs(o2[i] - lambda * z2[i]));
        den = std::max(den, std::abs(z2[i]));
    }
    if (den == 0.0) throw std::invalid_argument("empty window");
    return num / den;
}

}  // namespace chemowave
