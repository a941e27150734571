#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "chemowave/weights.hpp"

using namespace chemowave;

namespace {

WeightSpec make_weights(double w_plus = 3.0) {
    const ModelParams p;
    return WeightSpec(p, derive(p), w_plus);
}

}  // namespace

TEST_CASE("weights are exact exponentials outside the blend zones") {
    const WeightSpec w = make_weights();
    CHECK(w.w_minus() == -3.0);
    CHECK(w.eta_plus(-2.0) == 1.0);
    CHECK(w.eta_plus(2.0) == std::exp(6.0));      // bit-level library exp
    CHECK(w.eta_minus(-2.0) == std::exp(6.0));    // w_minus * (-2) = 6
    CHECK(w.eta_minus(0.5) == 1.0);
    CHECK(w.eta(0.0) == 1.0);
    for (double xi = -3.0; xi <= 3.0; xi += 0.25) CHECK(w.eta(xi) >= 1.0);
}

TEST_CASE("weight jets agree with finite differences across the blend") {
    const WeightSpec w = make_weights(2.0);
    const double h = 1e-5;
    // 0 and +-1 are excluded: phi''' jumps there, so the centered second
    // difference carries an O(h) kink error that swamps the tiny exact value.
    for (double xi : {-1.3, -0.7, -0.2, 0.4, 0.9, 1.2}) {
        const WeightJet j = w.eta_jet(xi);
        const double fd1 = (w.eta(xi + h) - w.eta(xi - h)) / (2.0 * h);
        const double fd2 = (w.eta(xi + h) - 2.0 * w.eta(xi) + w.eta(xi - h)) / (h * h);
        CHECK(j.value == doctest::Approx(w.eta(xi)).epsilon(1e-12));
        CHECK(j.first == doctest::Approx(fd1).epsilon(1e-7));
        CHECK(j.second == doctest::Approx(fd2).epsilon(1e-4));

        const WeightSpec::LogJet lj = w.log_eta_log_jet(xi);
        CHECK(std::exp(lj.value) == doctest::Approx(w.eta(xi)).epsilon(1e-12));
        CHECK(lj.d1 == doctest::Approx(fd1 / w.eta(xi)).epsilon(1e-6));
    }
}

TEST_CASE("eta is C2 across the matching points") {
    const WeightSpec w = make_weights();
    const double h = 1e-6;
    for (double xi0 : {-1.0, 0.0, 1.0}) {
        const WeightJet a = w.eta_jet(xi0 - h);
        const WeightJet b = w.eta_jet(xi0 + h);
        CHECK(std::abs(a.value - b.value) < 1e-4 * std::max(1.0, a.value));
        CHECK(std::abs(a.first - b.first) < 1e-3 * std::max(1.0, std::abs(a.first)));
        CHECK(std::abs(a.second - b.second) < 1e-2 * std::max(1.0, std::abs(a.second)));
    }
}

TEST_CASE("w_plus must lie in J") {
    const ModelParams p;
    const DerivedQuantities dq = derive(p);
    CHECK_THROWS_WITH(WeightSpec(p, dq, 5.0), "w_plus outside J");
    CHECK_THROWS_WITH(WeightSpec(p, dq, 0.1), "w_plus outside J");
    CHECK_NOTHROW(WeightSpec(p, dq, dq.J_lo));
    CHECK_NOTHROW(WeightSpec(p, dq, dq.J_hi));
}

TEST_CASE("discrete weighted norms") {
    const WeightSpec w = make_weights();
    std::vector<double> xi, ones, inv_eta, zero;
    for (double s = -10.0; s <= 10.0; s += 0.01) {
        xi.push_back(s);
        ones.push_back(1.0);
        inv_eta.push_back(1.0 / w.eta(s));
        zero.push_back(0.0);
    }
    CHECK(w.norm_X2(xi, zero) == 0.0);
    CHECK(w.norm_X2(xi, inv_eta) == doctest::Approx(1.0).epsilon(1e-12));
    // D-norm dominates the X-norm.
    CHECK(w.norm_X2(xi, inv_eta) <= w.norm_D2(xi, inv_eta, ones, ones));
    // X1 uses eta_plus only: left tail not amplified.
    CHECK(w.norm_X1(std::vector<double>{-5.0}, std::vector<double>{2.0}) == 2.0);
}

TEST_CASE("gauge identity eta_minus * e^{a xi} = 1 on the far left") {
    const WeightSpec w = make_weights();
    for (double xi : {-30.0, -10.0, -1.0}) {
        CHECK(std::exp(w.log_eta_minus(xi) + 3.0 * xi) == 1.0);
        CHECK(w.log_eta_exp_a(xi) == w.log_eta_plus(xi) + (w.log_eta_minus(xi) + 3.0 * xi));
    }
    // Gauge norm equals the plain norm computed on representable values.
    std::vector<double> xi{-2.0, 0.0, 2.0}, p{1.0, 2.0, 3.0};
    double direct = 0.0;
    for (size_t i = 0; i < xi.size(); ++i)
        direct = std::max(direct, w.eta(xi[i]) * std::exp(3.0 * xi[i]) * p[i]);
    CHECK(w.norm_X2_gauge(xi, p) == doctest::Approx(direct).epsilon(1e-12));
    CHECK(w.min_weighted_v_gauge(xi, p) > 0.0);
    p[1] = -2.0;
    CHECK(w.min_weighted_v_gauge(xi, p) < 0.0);
}
