#include "chemowave/model.hpp"

#include <cmath>
#include <stdexcept>

#include "chemowave/scalar_maps.hpp"

namespace chemowave {

std::vector<std::string> validate(const ModelParams& p) {
    std::vector<std::string> report;
    if (!(p.alpha > 0.0)) report.push_back("alpha > 0 fails");
    if (!(p.chi > 0.0)) report.push_back("chi > 0 fails");
    if (!(p.gamma > 0.0)) report.push_back("gamma > 0 fails");
    if (!(p.l > 0.0)) report.push_back("l > 0 fails");
    if (!(p.c > 0.0)) report.push_back("c > 0 fails");
    if (!(p.d.coefficient >= 0.0)) report.push_back("d coefficient >= 0 fails");
    if (p.gamma > 0.0 && p.c > 0.0 && !(p.c * p.c > 4.0 * p.gamma))
        report.push_back("existence condition c > 2*sqrt(gamma) fails");
    return report;
}

DerivedQuantities derive(const ModelParams& params) {
    auto report = validate(params);
    if (!report.empty()) {
        std::string msg = "invalid parameters:";
        for (const auto& r : report) msg += " [" + r + "]";
        throw std::invalid_argument(msg);
    }

    DerivedQuantities dq;
    dq.a = params.c / params.chi;
    dq.mu = 2.0 * dq.a + params.c;
    dq.nu = dq.a * dq.a + dq.a * params.c + params.gamma;

    const double disc = dq.mu * dq.mu - 4.0 * dq.nu;  // equals c^2 - 4 gamma
    dq.kappa_plus = 0.5 * (-dq.mu + std::sqrt(disc));
    dq.kappa_minus = 0.5 * (-dq.mu - std::sqrt(disc));

    ScalarMaps maps(params);
    dq.p0 = std::exp(maps.G(dq.nu / params.l) / params.chi);
    dq.u_minus = dq.nu / params.l;

    dq.f_prime_p0 = maps.f_prime(dq.p0);
    // Jacobian [[0,1],[-f'(p0),-mu]]: positive root of t^2 + mu t + f'(p0) = 0.
    dq.lambda_unstable =
        0.5 * (-dq.mu + std::sqrt(dq.mu * dq.mu - 4.0 * dq.f_prime_p0));

    dq.J_lo = -(dq.a + dq.kappa_plus);
    dq.J_hi = -(params.chi / params.alpha) * dq.kappa_plus;
    dq.Ju_lo = 0.5 * params.c + 0.5 * std::sqrt(params.c * params.c - 4.0 * params.gamma);
    return dq;
}

bool check_R1(const ModelParams& p) {
    if (p.chi > p.alpha - 2.0) return true;
    // chi <= alpha - 2 implies alpha - chi - 1 >= 1 > 0.
    const double bound = p.gamma * (p.chi - p.alpha) * (p.chi - p.alpha) /
                         (p.alpha - p.chi - 1.0);
    return p.c * p.c > bound;
}

bool check_R2(const ModelParams& p, double w_plus) {
    if (!(p.chi > p.alpha - 2.0)) return false;
    if (p.alpha > 1.0) {
        const double bound =
            p.gamma * (p.alpha + p.chi) * (p.alpha + p.chi) /
            ((p.chi + 1.0) * (p.alpha - 1.0));
        if (!(p.c * p.c < bound)) return false;
    }
    const DerivedQuantities dq = derive(p);
    // Slack at the closed upper endpoint absorbs rounding of J_hi.
    const double slack = 1e-14 * std::max(1.0, std::abs(dq.J_hi));
    return w_plus > dq.Ju_lo && w_plus <= dq.J_hi + slack;
}

}  // namespace chemowave
