// Acceptance gate: one self-contained check per criterion, one line of
// output each, nonzero exit if anything fails.
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "chemowave/linearization.hpp"
#include "chemowave/simulator.hpp"
#include "chemowave/spectrum.hpp"

using namespace chemowave;

namespace {

int g_failures = 0;

void report(int id, const char* title, bool ok, const std::string& detail) {
    if (!ok) ++g_failures;
    std::printf("[%s] criterion %d: %s — %s\n", ok ? "PASS" : "FAIL", id, title,
                detail.c_str());
    std::fflush(stdout);
}

struct Setup {
    ModelParams params;
    DerivedQuantities dq;
    ScalarMaps maps;
    Setup() : dq(derive(params)), maps(params) {}
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// --- 1: derived closed forms at the reference point --------------------------

void criterion1(const Setup& s) {
    const double r5 = std::sqrt(5.0);
    const double kp = 0.5 * (-9.0 + r5);
    double worst = 0.0;
    const auto acc = [&](double got, double want) {
        worst = std::max(worst, std::abs(got - want));
    };
    acc(s.dq.a, 3.0);
    acc(s.dq.mu, 9.0);
    acc(s.dq.nu, 19.0);
    acc(s.dq.kappa_plus, kp);
    acc(s.dq.kappa_minus, 0.5 * (-9.0 - r5));
    acc(s.dq.u_minus, 19.0);
    // p0 = exp(G(nu/l)/chi) with G = log at the reference point.
    acc(s.dq.p0, std::exp(s.maps.G(19.0)));
    acc(s.dq.J_lo, -(3.0 + kp));
    acc(s.dq.J_hi, -kp);
    acc(s.dq.Ju_lo, 0.5 * (3.0 + r5));
    // a2+ = c + chi (c - sqrt(c^2 - 4 gamma)) / 2 enters via J_hi - J_lo... check
    // directly through lambda_unstable instead: (-mu + sqrt(mu^2 - 4 f'(p0)))/2.
    acc(s.dq.lambda_unstable,
        0.5 * (-9.0 + std::sqrt(81.0 - 4.0 * s.maps.f_prime(s.dq.p0))));
    report(1, "derived closed forms", worst <= 1e-12, "max abs error " + fmt(worst));
}

// --- 2: scalar-map suite -----------------------------------------------------

void criterion2(const Setup& s) {
    bool ok = true;
    std::string why = "all identities hold";
    const auto fail = [&](const std::string& msg) {
        if (ok) why = msg;
        ok = false;
    };
    const DiffusionPerturbation::Family fams[] = {
        DiffusionPerturbation::Family::Zero, DiffusionPerturbation::Family::Linear,
        DiffusionPerturbation::Family::Quadratic};
    for (auto fam : fams) {
        ModelParams p;
        p.d.family = fam;
        p.d.coefficient = 0.6;
        const ScalarMaps m(p);
        for (int k = 0; k <= 120; ++k) {
            const double y = -50.0 + 0.5 * k;
            if (std::abs(m.G(m.G_inverse(y)) - y) > 1e-12 * std::max(1.0, std::abs(y)))
                fail("roundtrip fails at y=" + fmt(y));
        }
        const double nu = m.nu();
        for (double q = 0.25; q < 30.0; q += 0.7)
            if (std::abs(m.f(q) + m.g(q) - nu * q) > 1e-12 * nu * q)
                fail("f+g != nu p at p=" + fmt(q));
        if (std::abs(m.f_prime(0.0) - nu) > 1e-10) fail("f'(0) != nu");
        const DerivedQuantities d = derive(p);
        if (std::abs(m.f(d.p0)) > 1e-10) fail("f(p0) != 0");
        // (G^-1)' agreement with a centered difference, then the order-2
        // ratio at steps large enough that truncation dominates the Newton
        // rounding noise of G_inverse.
        for (double y : {-6.0, 0.0, 3.0}) {
            const double ex = m.G_inverse_prime(y);
            const double ee =
                std::abs((m.G_inverse(y + 1e-4) - m.G_inverse(y - 1e-4)) / 2e-4 - ex);
            if (ee > 1e-6 * std::max(1.0, std::abs(ex))) fail("(G^-1)' mismatch");
            const double e1 =
                std::abs((m.G_inverse(y + 2e-3) - m.G_inverse(y - 2e-3)) / 4e-3 - ex);
            const double e2 =
                std::abs((m.G_inverse(y + 1e-3) - m.G_inverse(y - 1e-3)) / 2e-3 - ex);
            if (e1 > 1e-9 && e2 > 0.35 * e1) fail("(G^-1)' not order 2");
        }
    }
    report(2, "scalar-map suite", ok, why);
}

// --- 3 & 4: wave construction and tail rates ---------------------------------

WaveProfile criterion3(const Setup& s) {
    const RawOrbit raw = shoot(s.dq, s.maps, {});
    const WaveProfile w = assemble(raw, s.dq, s.maps, -30.0, 30.0, 1 << 14);
    const auto res = residual(w, s.params, s.dq, s.maps);

    bool inv = true;
    for (size_t i = 0; i < w.xi.size() && inv; ++i) {
        inv = w.p_star[i] > 0.0 && w.p_star[i] <= s.dq.p0 && w.u_star[i] > 0.0 &&
              w.v_star[i] > 0.0 && w.q_star[i] < 0.0 &&
              (i == 0 || w.u_star[i] <= w.u_star[i - 1]);
    }

    OrbitOptions half;
    half.eps0_rel = 0.5e-8;
    const WaveProfile w2 =
        assemble(shoot(s.dq, s.maps, half), s.dq, s.maps, -30.0, 30.0, 1 << 14);
    double sup = 0.0;
    for (size_t i = 0; i < w.xi.size(); ++i)
        sup = std::max(sup, std::abs(w.p_star[i] - w2.p_star[i]));

    const bool ok = res[0] <= 1e-6 && res[1] <= 1e-5 && inv && sup <= 1e-6;
    report(3, "wave residuals and invariants", ok,
           "r1=" + fmt(res[0]) + " r2=" + fmt(res[1]) +
               " eps0-halving sup=" + fmt(sup) + (inv ? "" : " invariants violated"));
    return w;
}

void criterion4(const Setup& s, const WaveProfile& w) {
    const auto fits = measure_rates(w, s.dq, s.params);
    double worst = 0.0;
    int right = 0, left = 0;
    for (const auto& f : fits) {
        worst = std::max(worst, std::abs(f.fitted - f.target));
        (f.side == "right" ? right : left)++;
    }
    const size_t e = w.xi.size() - 1;
    const double ratio_err = std::abs(w.q_star[e] / w.p_star[e] - s.dq.kappa_plus);
    const bool ok = right == 5 && left == 3 && worst <= 1e-2 && ratio_err <= 1e-3;
    report(4, "asymptotic tail rates", ok,
           "max rate error " + fmt(worst) + ", q/p endpoint error " + fmt(ratio_err));
}

// --- 5: spectral curves ------------------------------------------------------

void criterion5(const Setup& s) {
    bool ok = true;
    std::string why = "determinants, roots and vertices agree";
    const auto fail = [&](const std::string& msg) {
        if (ok) why = msg;
        ok = false;
    };

    std::mt19937_64 rng(2026);
    std::uniform_real_distribution<double> lam(-10.0, 10.0), hh(-5.0, 5.0),
        frac(0.0, 1.0);
    for (int k = 0; k < 1000; ++k) {
        const double w = s.dq.J_lo + frac(rng) * (s.dq.J_hi - s.dq.J_lo);
        const Complex lambda(lam(rng), lam(rng));
        const double h = hh(rng);
        const Complex a = dispersion_det(s.params, s.dq, w, lambda, h);
        const Complex b = dispersion_det_direct(s.params, s.dq, w, lambda, h);
        if (std::abs(a - b) > 1e-10 * std::max(1.0, std::abs(a)))
            fail("det mismatch at h=" + fmt(h));
    }

    for (const auto& pt : essential_curves(s.params, s.dq, 3.0, -3.0, 3.0, 601)) {
        if (std::abs(dispersion_det(s.params, s.dq, 3.0, pt.S1, pt.h)) > 1e-10 ||
            std::abs(dispersion_det(s.params, s.dq, 3.0, pt.S2, pt.h)) > 1e-10)
            fail("sampled point is not a dispersion root");
    }

    if (std::abs(max_unstable_real_part(s.params, 3.0) - 1.0) > 1e-12)
        fail("S2 vertex at w=3");
    if (std::abs(max_unstable_real_part(s.params, 0.5) + 0.25) > 1e-12)
        fail("S2 vertex at w=1/2");

    std::uniform_real_distribution<double> c_d(2.5, 9.0), pos(0.2, 4.0);
    int sets = 0;
    while (sets < 50) {
        ModelParams p;
        p.c = c_d(rng);
        p.gamma = pos(rng);
        if (p.c <= 2.0 * std::sqrt(p.gamma) + 1e-3) continue;
        p.alpha = pos(rng);
        p.chi = pos(rng);
        p.l = pos(rng);
        const DerivedQuantities d = derive(p);
        if (!check_R1(p)) continue;
        for (int k = 0; k < 4; ++k) {
            const double w = d.J_lo + frac(rng) * (d.J_hi - d.J_lo);
            for (double h = 0.0; h <= 4.0; h += 0.25)
                if (curve_point(p, d, w, h).S1.real() > 1e-12)
                    fail("S1 enters the right half-plane");
        }
        ++sets;
    }
    report(5, "spectral curves", ok, why);
}

// --- 6: Weyl residual decay --------------------------------------------------

void criterion6(const Setup& s) {
    const WaveProfile w =
        assemble(shoot(s.dq, s.maps, {}), s.dq, s.maps, -30.0, 40.0, 1 << 13);
    const WeightSpec weights(s.params, s.dq, 3.0);
    const auto coeffs = coefficients(w, s.params, s.dq, std::nullopt, weights);
    const ConjugatedOperator op(coeffs, weights, w.dx);
    const Complex lambda(1.0, 0.0);
    const double r4 = weyl_residual(op, lambda, 0.0, 20.0, 4.0);
    const double r8 = weyl_residual(op, lambda, 0.0, 20.0, 8.0);
    const double r16 = weyl_residual(op, lambda, 0.0, 20.0, 16.0);
    const bool ok = r8 <= 0.6 * r4 && r16 <= 0.6 * r8;
    report(6, "Weyl residual decay", ok,
           "residuals " + fmt(r4) + " / " + fmt(r8) + " / " + fmt(r16) +
               ", ratios " + fmt(r8 / r4) + ", " + fmt(r16 / r8));
}

// --- 7: steady-wave drift ----------------------------------------------------

double drift_to_t1(const Setup& s, const WeightSpec& weights, size_t N,
                   double dt_scale) {
    const Grid g = Grid::make(-30.0, 40.0, N);
    const WaveProfile w =
        assemble(shoot(s.dq, s.maps, {}), s.dq, s.maps, g.L_minus, g.L_plus, g.N);
    const Simulator sim(s.params, s.dq, w, weights, g);
    Simulator::State st = sim.initial_state();
    const double bound = dt_scale * 0.9 * sim.max_dt(st);
    const int n = static_cast<int>(std::ceil(1.0 / bound));
    const double dt = 1.0 / n;
    for (int k = 0; k < n; ++k) sim.step(st, dt);
    return sim.norms(st).norm_D;
}

void criterion7(const Setup& s) {
    const WeightSpec weights(s.params, s.dq, 3.0);
    const double d0 = drift_to_t1(s, weights, 1 << 13, 1.0);
    const double d1 = drift_to_t1(s, weights, 1 << 13, 0.5);
    const bool ok = d0 <= 1e-3 && d1 <= 0.25 * d0 + 1e-15;
    report(7, "steady-wave drift", ok,
           "drift " + fmt(d0) + ", refined " + fmt(d1));
}

// --- 8: instability growth rate ----------------------------------------------

InstabilityResult fit_at(const Setup& s, double w_plus, size_t N) {
    const Grid g = Grid::make(-30.0, 40.0, N);
    const WeightSpec weights(s.params, s.dq, w_plus);
    const WaveProfile w =
        assemble(shoot(s.dq, s.maps, {}), s.dq, s.maps, g.L_minus, g.L_plus, g.N);
    const Simulator sim(s.params, s.dq, w, weights, g);
    PerturbationSpec spec;  // carrier 0, amplitude 1e-6 defaults
    const double predicted = max_unstable_real_part(s.params, w_plus);
    return run_instability(sim, spec, 8.0, 0.05, predicted);
}

void criterion8(const Setup& s) {
    const InstabilityResult coarse = fit_at(s, 3.0, 1 << 12);
    const InstabilityResult fine = fit_at(s, 3.0, 1 << 13);
    const InstabilityResult control = fit_at(s, 0.5, 1 << 12);
    const bool in_band = coarse.window_found && coarse.fitted_rate >= 0.6 &&
                         coarse.fitted_rate <= 1.5;
    const bool converging =
        fine.window_found &&
        std::abs(fine.fitted_rate - 1.0) <= std::abs(coarse.fitted_rate - 1.0) + 0.02;
    const bool ok = in_band && converging && !control.window_found;
    report(8, "instability growth rate", ok,
           "fit " + fmt(coarse.fitted_rate) + " -> " + fmt(fine.fitted_rate) +
               " (predicted 1), control window " +
               (control.window_found ? "found" : "absent"));
}

// --- 9: time-one-map escape --------------------------------------------------

void criterion9(const Setup& s) {
    const Grid g = Grid::make(-30.0, 40.0, 1 << 12);
    const WaveProfile w =
        assemble(shoot(s.dq, s.maps, {}), s.dq, s.maps, g.L_minus, g.L_plus, g.N);

    PerturbationSpec spec;
    spec.amplitude = 1e-4;

    const WeightSpec unstable(s.params, s.dq, 3.0);
    const Simulator sim(s.params, s.dq, w, unstable, g);
    const EscapeResult esc = time_one_map_escape(sim, spec, 1e-2, 12);

    const WeightSpec stable(s.params, s.dq, 0.5);
    const Simulator sim2(s.params, s.dq, w, stable, g);
    const EscapeResult ctrl = time_one_map_escape(sim2, spec, 1e-2, 30);

    const bool ok = esc.escaped && esc.n_escape <= 12 && !ctrl.escaped;
    report(9, "time-one-map escape", ok,
           (esc.escaped ? "escaped at n=" + std::to_string(esc.n_escape)
                        : std::string("no escape")) +
               ", control " + (ctrl.escaped ? "escaped" : "bounded"));
}

}  // namespace

int main() {
    const Setup s;
    criterion1(s);
    criterion2(s);
    const WaveProfile w = criterion3(s);
    criterion4(s, w);
    criterion5(s);
    criterion6(s);
    criterion7(s);
    criterion8(s);
    criterion9(s);
    std::printf("%d of 9 criteria passed\n", 9 - g_failures);
    return g_failures == 0 ? 0 : 1;
}
