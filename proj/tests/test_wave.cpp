#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "chemowave/wave.hpp"

using namespace chemowave;

namespace {

struct Setup {
    ModelParams params;
    DerivedQuantities dq;
    ScalarMaps maps;
    Setup() : dq(derive(params)), maps(params) {}
};

WaveProfile reference_wave(const Setup& s, size_t n = 1 << 14, OrbitOptions opts = {}) {
    const RawOrbit raw = shoot(s.dq, s.maps, opts);
    return assemble(raw, s.dq, s.maps, -30.0, 30.0, n);
}

}  // namespace

TEST_CASE("unstable direction leaves the saddle correctly") {
    const Setup s;
    const auto dir = unstable_direction(s.dq, s.maps);
    CHECK(dir[0] < 0.0);  // p decreasing
    CHECK(dir[1] < 0.0);  // q negative
    CHECK(std::hypot(dir[0], dir[1]) == doctest::Approx(1.0).epsilon(1e-14));
    // Eigenvector of [[0,1],[-f'(p0),-mu]] for lambda_unstable.
    CHECK(dir[1] == doctest::Approx(s.dq.lambda_unstable * dir[0]).epsilon(1e-12));
}

TEST_CASE("shooting produces a monotone heteroclinic orbit") {
    const Setup s;
    const RawOrbit raw = shoot(s.dq, s.maps, {});
    REQUIRE(raw.p.size() > 100);
    CHECK(raw.p.front() > 0.999 * s.dq.p0);
    CHECK(raw.p.back() <= 1e-55);
    for (size_t i = 1; i < raw.p.size(); ++i) {
        CHECK(raw.p[i] < raw.p[i - 1]);
        CHECK(raw.q[i] < 0.0);
    }

    OrbitOptions tiny;
    tiny.xi_span_max = 3.0;
    CHECK_THROWS_WITH(shoot(s.dq, s.maps, tiny), "span exceeded");
}

TEST_CASE("assembled profile satisfies both travelling-wave residuals") {
    const Setup s;
    const WaveProfile w = reference_wave(s);
    const auto res = residual(w, s.params, s.dq, s.maps);
    CHECK(res[0] <= 1e-6);
    CHECK(res[1] <= 1e-5);

    // Phase convention and invariants.
    const size_t n = w.xi.size();
    size_t i0 = 0;
    while (i0 + 1 < n && w.xi[i0] < 0.0) ++i0;
    // xi = 0 falls between grid points; interpolate linearly to it.
    const double frac = -w.xi[i0 - 1] / (w.xi[i0] - w.xi[i0 - 1]);
    const double p_at_0 = w.p_star[i0 - 1] + frac * (w.p_star[i0] - w.p_star[i0 - 1]);
    CHECK(p_at_0 == doctest::Approx(0.5 * s.dq.p0).epsilon(1e-6));
    for (size_t i = 0; i < n; ++i) {
        CHECK(w.p_star[i] > 0.0);
        CHECK(w.p_star[i] <= s.dq.p0);  // equality only by left-tail rounding
        CHECK(w.u_star[i] > 0.0);
        CHECK(w.v_star[i] > 0.0);
        CHECK(w.q_star[i] < 0.0);
        if (i > 0) CHECK(w.u_star[i] <= w.u_star[i - 1]);  // front shape
    }
    CHECK(w.u_star.front() == doctest::Approx(s.dq.u_minus).epsilon(1e-8));
}

TEST_CASE("first integral of the substitution holds along the profile") {
    const Setup s;
    const WaveProfile w = reference_wave(s, 1 << 12);
    // alpha log u + D(u) = chi log v - c xi, i.e. G(u) - chi log v + c xi = 0.
    for (size_t i = 0; i < w.xi.size(); i += 97) {
        const double lhs = s.maps.G(w.u_star[i]) -
                           s.params.chi * w.log_v(i, s.dq.a) + s.params.c * w.xi[i];
        CHECK(std::abs(lhs) < 1e-9);
    }
}

TEST_CASE("initial-offset halving leaves the phase-fixed profile unchanged") {
    const Setup s;
    OrbitOptions half;
    half.eps0_rel = 0.5e-8;
    const WaveProfile a = reference_wave(s, 1 << 12);
    const WaveProfile b = reference_wave(s, 1 << 12, half);
    double sup = 0.0;
    for (size_t i = 0; i < a.xi.size(); ++i)
        sup = std::max(sup, std::abs(a.p_star[i] - b.p_star[i]));
    CHECK(sup <= 1e-6);
}

TEST_CASE("tail rates match the analytic targets") {
    const Setup s;
    const WaveProfile w = reference_wave(s);
    const auto fits = measure_rates(w, s.dq, s.params);
    REQUIRE(fits.size() == 8);
    int right = 0, left = 0;
    for (const auto& f : fits) {
        INFO(f.side << " " << f.quantity);
        CHECK(std::abs(f.fitted - f.target) <= 1e-2);
        (f.side == "right" ? right : left)++;
    }
    CHECK(right == 5);
    CHECK(left == 3);

    // q*/p* -> kappa_plus at the right end (Lemma 3.5 oracle).
    const size_t e = w.xi.size() - 1;
    CHECK(std::abs(w.q_star[e] / w.p_star[e] - s.dq.kappa_plus) <= 1e-3);

    // Short grid: fewer than 10 e-foldings of tail decay is refused.
    const RawOrbit raw = shoot(s.dq, s.maps, {});
    const WaveProfile shorty = assemble(raw, s.dq, s.maps, -4.0, 4.0, 1 << 10);
    CHECK_THROWS_WITH(measure_rates(shorty, s.dq, s.params), "insufficient tail");
}
