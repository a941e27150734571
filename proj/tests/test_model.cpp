#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "chemowave/model.hpp"

using namespace chemowave;

namespace {

ModelParams p0() { return ModelParams{}; }  // alpha=chi=gamma=l=1, c=3, d=0

}  // namespace

TEST_CASE("derived quantities at the reference point") {
    const DerivedQuantities dq = derive(p0());
    const double s5 = std::sqrt(5.0);
    CHECK(dq.a == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(dq.mu == doctest::Approx(9.0).epsilon(1e-14));
    CHECK(dq.nu == doctest::Approx(19.0).epsilon(1e-14));
    CHECK(std::abs(dq.kappa_plus - 0.5 * (-9.0 + s5)) < 1e-12);
    CHECK(std::abs(dq.kappa_minus - 0.5 * (-9.0 - s5)) < 1e-12);
    CHECK(std::abs(dq.p0 - 19.0) < 1e-12);
    CHECK(std::abs(dq.u_minus - 19.0) < 1e-12);
    CHECK(std::abs(dq.f_prime_p0 - (-19.0)) < 1e-11);
    CHECK(std::abs(dq.lambda_unstable - 0.5 * (-9.0 + std::sqrt(157.0))) < 1e-11);
    CHECK(std::abs(dq.J_lo - 0.5 * (3.0 - s5)) < 1e-12);
    CHECK(std::abs(dq.J_hi - 0.5 * (9.0 - s5)) < 1e-12);
    CHECK(std::abs(dq.Ju_lo - 0.5 * (3.0 + s5)) < 1e-12);
}

TEST_CASE("validation reports every violated constraint") {
    CHECK(validate(p0()).empty());

    ModelParams slow = p0();
    slow.c = 2.0;  // c^2 = 4 = 4 gamma: not strictly above
    const auto report = validate(slow);
    REQUIRE(report.size() == 1);
    CHECK(report[0] == "existence condition c > 2*sqrt(gamma) fails");

    ModelParams bad = p0();
    bad.alpha = 0.0;
    bad.l = -1.0;
    CHECK(validate(bad).size() == 2);

    CHECK_THROWS_AS(derive(slow), std::invalid_argument);
}

TEST_CASE("kappa roots solve the characteristic quadratic") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> unit(0.2, 3.0);
    for (int k = 0; k < 200; ++k) {
        ModelParams p;
        p.alpha = unit(rng);
        p.chi = unit(rng);
        p.gamma = unit(rng);
        p.l = unit(rng);
        p.c = 2.0 * std::sqrt(p.gamma) * (1.05 + unit(rng));
        const DerivedQuantities dq = derive(p);
        // kappa+- are the roots of k^2 + mu k + nu = 0.
        CHECK(std::abs(dq.kappa_plus + dq.kappa_minus + dq.mu) < 1e-10);
        CHECK(std::abs(dq.kappa_plus * dq.kappa_minus - dq.nu) < 1e-8 * dq.nu);
        CHECK(dq.nu > p.gamma);
        CHECK(dq.kappa_plus < 0.0);
        CHECK(dq.J_lo < dq.J_hi);
        CHECK(dq.lambda_unstable > 0.0);
    }
}

TEST_CASE("weight-rate restrictions R1 and R2") {
    const ModelParams p = p0();
    CHECK(check_R1(p));

    const DerivedQuantities dq = derive(p);
    CHECK(check_R2(p, 3.0));
    CHECK(check_R2(p, dq.J_hi));
    CHECK_FALSE(check_R2(p, 0.5));
    CHECK_FALSE(check_R2(p, dq.Ju_lo));       // open lower endpoint
    CHECK_FALSE(check_R2(p, dq.J_hi + 0.1));  // above J

    // chi <= alpha - 2 can never satisfy (R2).
    ModelParams thick = p0();
    thick.alpha = 4.0;
    thick.c = 3.0;
    CHECK_FALSE(check_R2(thick, 1.0));
}
