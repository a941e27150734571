#include "chemowave/wave.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/numeric/odeint.hpp>

namespace chemowave {

namespace {

using State = std::array<double, 2>;

// Two-point quintic Hermite on [x0, x1] from (y, y', y'') at both ends.
double hermite5(double x, double x0, double x1, const std::array<double, 3>& l,
                const std::array<double, 3>& r) {
    const double h = x1 - x0;
    const double s = (x - x0) / h;
    const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
    const double H00 = 1.0 - 10.0 * s3 + 15.0 * s4 - 6.0 * s5;
    const double H10 = s - 6.0 * s3 + 8.0 * s4 - 3.0 * s5;
    const double H20 = 0.5 * s2 - 1.5 * s3 + 1.5 * s4 - 0.5 * s5;
    const double H01 = 10.0 * s3 - 15.0 * s4 + 6.0 * s5;
    const double H11 = -4.0 * s3 + 7.0 * s4 - 3.0 * s5;
    const double H21 = 0.5 * s3 - s4 + 0.5 * s5;
    return l[0] * H00 + h * l[1] * H10 + h * h * l[2] * H20 +
           r[0] * H01 + h * r[1] * H11 + h * h * r[2] * H21;
}

struct OrbitSystem {
    const ScalarMaps& maps;
    double mu;
    void operator()(const State& s, State& dsdt, double) const {
        dsdt[0] = s[1];
        dsdt[1] = -maps.f(s[0]) - mu * s[1];
    }
};

// (value, first, second derivative) jets of p and q at a node.
std::array<double, 3> p_jet(const ScalarMaps& maps, double mu, double p, double q) {
    return {p, q, -maps.f(p) - mu * q};
}
std::array<double, 3> q_jet(const ScalarMaps& maps, double mu, double p, double q) {
    const double qp = -maps.f(p) - mu * q;
    return {q, qp, -maps.f_prime(p) * q - mu * qp};
}

struct OrbitSampler {
    const RawOrbit& raw;
    const ScalarMaps& maps;
    const DerivedQuantities& dq;
    mutable size_t hint = 0;

    // Evaluate (p, q) at raw-orbit coordinate xi; left of the start node the
    // linearized unstable manifold continues the orbit.
    State operator()(double xi) const {
        if (xi <= raw.xi.front()) {
            const double e = std::exp(dq.lambda_unstable * (xi - raw.xi.front()));
            return {dq.p0 + raw.dp_start * e, raw.dq_start * e};
        }
        if (xi > raw.xi.back())
            throw std::runtime_error("grid extends beyond computed orbit");
        if (hint + 1 >= raw.xi.size() || raw.xi[hint] > xi) hint = 0;
        while (raw.xi[hint + 1] < xi) ++hint;
        const size_t i = hint;
        const auto pl = p_jet(maps, dq.mu, raw.p[i], raw.q[i]);
        const auto pr = p_jet(maps, dq.mu, raw.p[i + 1], raw.q[i + 1]);
        const auto ql = q_jet(maps, dq.mu, raw.p[i], raw.q[i]);
        const auto qr = q_jet(maps, dq.mu, raw.p[i + 1], raw.q[i + 1]);
        return {hermite5(xi, raw.xi[i], raw.xi[i + 1], pl, pr),
                hermite5(xi, raw.xi[i], raw.xi[i + 1], ql, qr)};
    }
};

}  // namespace

std::array<double, 2> unstable_direction(const DerivedQuantities& dq,
                                         const ScalarMaps& maps) {
    const double fp = maps.f_prime(dq.p0);
    if (!(fp < 0.0))
        throw std::invalid_argument("saddle assumption violated: f'(p0) >= 0");
    const double lam = dq.lambda_unstable;
    const double n = std::sqrt(1.0 + lam * lam);
    // Orbit must leave (p0, 0) with p decreasing and q < 0.
    return {-1.0 / n, -lam / n};
}

RawOrbit shoot(const DerivedQuantities& dq, const ScalarMaps& maps,
               const OrbitOptions& opts) {
    if (!(dq.mu > 2.0 * std::sqrt(dq.nu)))
        throw std::invalid_argument("existence condition mu > 2*sqrt(nu) fails");
    if (!(opts.eps0_rel > 0.0 && opts.p_stop > 0.0 && opts.rk_tol > 0.0))
        throw std::invalid_argument("invalid orbit options");

    const auto dir = unstable_direction(dq, maps);
    const double eps0 = opts.eps0_rel * dq.p0;

    RawOrbit raw;
    raw.dp_start = eps0 * dir[0];
    raw.dq_start = eps0 * dir[1];

    State s{dq.p0 + raw.dp_start, raw.dq_start};
    double xi = 0.0;
    double dt = 1e-3;

    namespace ode = boost::numeric::odeint;
    auto stepper = ode::make_controlled<ode::runge_kutta_dopri5<State>>(
        1e-100, opts.rk_tol);
    OrbitSystem sys{maps, dq.mu};

    raw.xi.push_back(xi);
    raw.p.push_back(s[0]);
    raw.q.push_back(s[1]);

    double p_prev = s[0];
    while (s[0] > opts.p_stop) {
        if (xi > opts.xi_span_max) throw std::runtime_error("span exceeded");
        dt = std::min(dt, opts.max_step);
        if (stepper.try_step(sys, s, xi, dt) == ode::success) {
            if (!(s[0] < p_prev) || !(s[1] < 0.0))
                throw std::runtime_error("monotonicity violated");
            p_prev = s[0];
            raw.xi.push_back(xi);
            raw.p.push_back(s[0]);
            raw.q.push_back(s[1]);
        }
    }
    return raw;
}

WaveProfile assemble(const RawOrbit& raw, const DerivedQuantities& dq,
                     const ScalarMaps& maps, double xi_min, double xi_max,
                     size_t n) {
    if (n < 8 || !(xi_min < xi_max)) throw std::invalid_argument("bad grid");
    OrbitSampler sample{raw, maps, dq};

    // Phase convention: find xi* with p(xi*) = p0/2, bisecting on the
    // Hermite interpolant between the bracketing nodes.
    const double p_half = 0.5 * dq.p0;
    auto it = std::lower_bound(raw.p.rbegin(), raw.p.rend(), p_half);
    if (it == raw.p.rbegin() || it == raw.p.rend())
        throw std::runtime_error("orbit does not cross p0/2");
    size_t k = raw.p.size() - 1 - (it - raw.p.rbegin());
    double lo = raw.xi[k], hi = raw.xi[k + 1];
    for (int i = 0; i < 200 && hi - lo > 1e-15 * (1.0 + std::abs(lo)); ++i) {
        const double mid = 0.5 * (lo + hi);
        (sample(mid)[0] > p_half ? lo : hi) = mid;
    }
    const double xi_star = 0.5 * (lo + hi);

    WaveProfile w;
    w.xi_shift = xi_star;
    w.dx = (xi_max - xi_min) / double(n - 1);
    w.xi.resize(n);
    w.p_star.resize(n);
    w.q_star.resize(n);
    w.u_star.resize(n);
    w.v_star.resize(n);
    w.u_prime.resize(n);
    w.u_double_prime.resize(n);
    w.v_prime.resize(n);
    w.v_double_prime.resize(n);
    w.log_p.resize(n);

    const ModelParams& mp = maps.params();
    const double a = dq.a, mu = dq.mu;
    for (size_t i = 0; i < n; ++i) {
        const double xi = xi_min + double(i) * w.dx;
        const State s = sample(xi + xi_star);
        const double p = s[0], q = s[1];
        if (!(p > 0.0)) throw std::runtime_error("nonpositive p in assembled profile");
        w.xi[i] = xi;
        w.p_star[i] = p;
        w.q_star[i] = q;
        w.log_p[i] = std::log(p);

        const double u = maps.G_inverse(mp.chi * w.log_p[i]);
        const double kd = mp.alpha + mp.d.d(u);
        const double up = (u / kd) * (mp.chi * q / p);
        const double qp = -maps.f(p) - mu * q;
        const double upp =
            (mp.chi * q / p) * (up / kd - u * up * mp.d.d_prime(u) / (kd * kd)) +
            (mp.chi * u / kd) * (qp / p - (q / p) * (q / p));
        w.u_star[i] = u;
        w.u_prime[i] = up;
        w.u_double_prime[i] = upp;

        const double ea = std::exp(a * xi);
        w.v_star[i] = ea * p;
        w.v_prime[i] = ea * (a * p + q);
        w.v_double_prime[i] = ea * (a * a * p + (2.0 * a - mu) * q - maps.f(p));
    }

    // Asymptotic constants from the right tail, in log form.
    const size_t e = n - 1;
    const double r_u = (mp.chi / mp.alpha) * dq.kappa_plus;
    w.S1_hat = std::exp(w.log_p[e] - dq.kappa_plus * w.xi[e]);
    w.S2_hat = std::exp(std::log(w.u_star[e]) - r_u * w.xi[e]);
    w.S3_hat = std::exp(std::log(std::abs(w.u_prime[e])) - r_u * w.xi[e]);
    return w;
}

std::array<double, 2> residual(const WaveProfile& w, const ModelParams& params,
                               const DerivedQuantities& dq, const ScalarMaps& maps) {
    const size_t n = w.xi.size();
    if (n < 5) throw std::invalid_argument("profile too small for residual");
    const double dx = w.dx;

    double sup_p = 0, sup_v = 0;
    for (size_t i = 0; i < n; ++i) {
        sup_p = std::max(sup_p, std::abs(w.p_star[i]));
        sup_v = std::max(sup_v, std::abs(w.v_star[i]));
    }

    auto d1 = [dx](const std::vector<double>& y, size_t i) {
        return (-y[i + 2] + 8.0 * y[i + 1] - 8.0 * y[i - 1] + y[i - 2]) / (12.0 * dx);
    };
    auto d2 = [dx](const std::vector<double>& y, size_t i) {
        return (-y[i + 2] + 16.0 * y[i + 1] - 30.0 * y[i] + 16.0 * y[i - 1] -
                y[i - 2]) / (12.0 * dx * dx);
    };

    double r1 = 0, r2 = 0;
    for (size_t i = 2; i + 2 < n; ++i) {
        const double res_p = d2(w.p_star, i) + dq.mu * d1(w.p_star, i) +
                             maps.f(w.p_star[i]);
        r1 = std::max(r1, std::abs(res_p));
        const double res_v = d2(w.v_star, i) + params.c * d1(w.v_star, i) +
                             params.gamma * w.v_star[i] -
                             params.l * w.u_star[i] * w.v_star[i];
        r2 = std::max(r2, std::abs(res_v));
    }
    return {r1 / sup_p, r2 / sup_v};
}

namespace {

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = double(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i]; sy += y[i]; sxx += x[i] * x[i]; sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

std::vector<RateFit> measure_rates(const WaveProfile& w, const DerivedQuantities& dq,
                                   const ModelParams& params) {
    const double xi_min = w.xi.front(), xi_max = w.xi.back();
    const double a = dq.a, mu = dq.mu;
    const double rate_u = (params.chi / params.alpha) * dq.kappa_plus;
    const double rate_v = dq.kappa_plus + a;

    // Tail coverage: the slowest-decaying quantity must span >= 10 e-foldings.
    if (std::abs(rate_v) * xi_max < 10.0 || a * std::abs(xi_min) < 10.0)
        throw std::runtime_error("insufficient tail");

    // Fit window: last 20% of each tail.
    auto window = [&](bool right) {
        std::vector<size_t> idx;
        for (size_t i = 0; i < w.xi.size(); ++i) {
            if (right && w.xi[i] >= 0.8 * xi_max) idx.push_back(i);
            if (!right && w.xi[i] <= 0.8 * xi_min) idx.push_back(i);
        }
        return idx;
    };

    std::vector<RateFit> out;
    auto fit = [&](const std::string& name, const std::string& side,
                   const std::vector<size_t>& idx, auto&& logval, double target) {
        std::vector<double> xs, ys;
        xs.reserve(idx.size());
        ys.reserve(idx.size());
        for (size_t i : idx) {
            xs.push_back(w.xi[i]);
            ys.push_back(logval(i));
        }
        out.push_back({name, side, fit_slope(xs, ys), target});
    };

    const auto right = window(true);
    const auto left = window(false);

    fit("u", "right", right, [&](size_t i) { return std::log(w.u_star[i]); }, rate_u);
    fit("u_prime", "right", right,
        [&](size_t i) { return std::log(std::abs(w.u_prime[i])); }, rate_u);
    // v-quantities in gauge-safe log form: log v = a*xi + log p etc.
    fit("v", "right", right, [&](size_t i) { return a * w.xi[i] + w.log_p[i]; },
        rate_v);
    fit("v_prime", "right", right,
        [&](size_t i) {
            return a * w.xi[i] +
                   std::log(std::abs(a * w.p_star[i] + w.q_star[i]));
        },
        rate_v);
    fit("v_double_prime", "right", right,
        [&](size_t i) { return std::log(std::abs(w.v_double_prime[i])); }, rate_v);

    fit("v", "left", left, [&](size_t i) { return a * w.xi[i] + w.log_p[i]; }, a);
    fit("v_prime", "left", left,
        [&](size_t i) {
            return a * w.xi[i] + std::log(std::abs(a * w.p_star[i] + w.q_star[i]));
        },
        a);
    fit("v_double_prime", "left", left,
        [&](size_t i) { return std::log(std::abs(w.v_double_prime[i])); }, a);
    (void)mu;
    return out;
}

}  // namespace chemowave
