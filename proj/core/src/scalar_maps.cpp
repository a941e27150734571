#include "chemowave/scalar_maps.hpp"

#include <cmath>
#include <stdexcept>

namespace chemowave {

ScalarMaps::ScalarMaps(const ModelParams& params, Options opts)
    : params_(params), opts_(opts) {
    if (!(opts_.newton_tol > 0.0)) throw std::invalid_argument("newton_tol > 0 fails");
    if (opts_.newton_max_iter < 1) throw std::invalid_argument("newton_max_iter >= 1 fails");
    const double a = params_.c / params_.chi;
    nu_ = a * a + a * params_.c + params_.gamma;
}

double ScalarMaps::G(double u) const {
    if (!(u > 0.0)) throw std::invalid_argument("G requires u > 0");
    return params_.alpha * std::log(u) + params_.d.D(u);
}

double ScalarMaps::G_inverse(double y) const {
    if (params_.d.family == DiffusionPerturbation::Family::Zero ||
        params_.d.coefficient == 0.0) {
        return std::exp(y / params_.alpha);
    }

    // Seed at the y -> -inf asymptote, then grow a bracket geometrically.
    double lo = std::exp(y / params_.alpha);
    double hi = lo;
    if (G(lo) > y) {
        while (G(lo) > y) { hi = lo; lo *= 0.5; }
    } else {
        while (G(hi) < y) { lo = hi; hi *= 2.0; }
    }

    // Newton with analytic G'(u) = (alpha + d(u))/u, safeguarded by the bracket.
    double u = std::exp(y / params_.alpha);
    if (u < lo || u > hi) u = 0.5 * (lo + hi);
    const double tol = opts_.newton_tol * std::max(1.0, std::abs(y));
    for (int it = 0; it < opts_.newton_max_iter; ++it) {
        const double r = G(u) - y;
        if (std::abs(r) <= tol) return u;
        if (r > 0.0) hi = u; else lo = u;
        const double gp = (params_.alpha + params_.d.d(u)) / u;
        double next = u - r / gp;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        u = next;
    }
    if (std::abs(G(u) - y) <= tol) return u;
    throw std::runtime_error("G_inverse: Newton iteration did not converge");
}

double ScalarMaps::G_inverse_prime(double y) const {
    const double u = G_inverse(y);
    return u / (params_.alpha + params_.d.d(u));
}

double ScalarMaps::f(double p) const {
    if (p == 0.0) return 0.0;
    return p * (nu_ - params_.l * G_inverse(params_.chi * std::log(std::abs(p))));
}

double ScalarMaps::f_prime(double p) const {
    if (p == 0.0) return nu_;
    const double y = params_.chi * std::log(std::abs(p));
    return nu_ - params_.l * G_inverse(y) - params_.chi * params_.l * G_inverse_prime(y);
}

double ScalarMaps::g(double p) const {
    if (p == 0.0) return 0.0;
    return params_.l * p * G_inverse(params_.chi * std::log(std::abs(p)));
}

}  // namespace chemowave
