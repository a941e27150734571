#include "chemowave/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "chemowave/scalar_maps.hpp"

namespace chemowave {

namespace {

// d(u* + x) - d(u*) without cancellation, per diffusion family.
double delta_d(const DiffusionPerturbation& d, double us, double x) {
    using F = DiffusionPerturbation::Family;
    switch (d.family) {
        case F::Zero:
            return 0.0;
        case F::Linear:
            return d.coefficient * x;
        case F::Quadratic:
            return d.coefficient * x * (2.0 * us + x);
    }
    return 0.0;
}

void fd_jet(const std::vector<double>& f, double dx, std::vector<double>& d1,
            std::vector<double>& d2) {
    const size_t n = f.size();
    d1.assign(n, 0.0);
    d2.assign(n, 0.0);
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

Grid Grid::make(double L_minus, double L_plus, size_t N) {
    if (!(L_minus < 0.0 && 0.0 < L_plus)) throw std::invalid_argument("grid must straddle 0");
    if (N < 16) throw std::invalid_argument("grid too small");
    Grid g;
    g.L_minus = L_minus;
    g.L_plus = L_plus;
    g.N = N;
    g.dx = (L_plus - L_minus) / static_cast<double>(N - 1);
    return g;
}

Simulator::Simulator(const ModelParams& params, const DerivedQuantities& dq,
                     const WaveProfile& profile, const WeightSpec& weights,
                     const Grid& grid, SimOptions opts)
    : params_(params), dq_(dq), weights_(weights), grid_(grid), opts_(opts) {
    if (!(params.chi > 0.0)) throw std::invalid_argument("chi must be positive");
    const size_t n = grid.N;
    if (profile.xi.size() != n || std::abs(profile.xi.front() - grid.L_minus) > 1e-9 ||
        std::abs(profile.xi.back() - grid.L_plus) > 1e-9)
        throw std::invalid_argument("profile/grid mismatch");
    if (std::abs(dq.kappa_plus) * grid.L_plus >= 600.0)
        throw std::invalid_argument("grid exceeds p-gauge underflow budget");

    xi_ = profile.xi;
    us_ = profile.u_star;
    ps_ = profile.p_star;

    usm_.resize(n - 1);
    psm_.resize(n - 1);
    dus_.resize(n - 1);
    dps_.resize(n - 1);
    rp_.resize(n - 1);
    for (size_t i = 0; i + 1 < n; ++i) {
        usm_[i] = 0.5 * (us_[i] + us_[i + 1]);
        psm_[i] = 0.5 * (ps_[i] + ps_[i + 1]);
        dus_[i] = (us_[i + 1] - us_[i]) / grid.dx;
        dps_[i] = (ps_[i + 1] - ps_[i]) / grid.dx;
        rp_[i] = dps_[i] / psm_[i];
    }

    wfac_.resize(n);
    etap_.resize(n);
    for (size_t i = 0; i < n; ++i) {
        wfac_[i] = std::exp(weights_.log_eta_exp_a(xi_[i]));
        etap_[i] = std::exp(weights_.log_eta_plus(xi_[i]));
    }

    // Unweighted C^2 reference magnitude of the wave in the (u, p) gauge.
    ScalarMaps maps(params, {});
    double su = 0, su1 = 0, su2 = 0, sp = 0, sp1 = 0, sp2 = 0;
    for (size_t i = 0; i < n; ++i) {
        su = std::max(su, std::abs(us_[i]));
        su1 = std::max(su1, std::abs(profile.u_prime[i]));
        su2 = std::max(su2, std::abs(profile.u_double_prime[i]));
        sp = std::max(sp, std::abs(ps_[i]));
        sp1 = std::max(sp1, std::abs(profile.q_star[i]));
        sp2 = std::max(sp2, std::abs(-maps.f(ps_[i]) - dq.mu * profile.q_star[i]));
    }
    wave_ref_ = su + su1 + su2 + sp + sp1 + sp2;
}

Simulator::State Simulator::initial_state() const {
    State s;
    s.t = 0;
    s.x.assign(grid_.N, 0.0);
    s.r.assign(grid_.N, 0.0);
    return s;
}

void Simulator::guard(const std::vector<double>& x, const std::vector<double>& r) const {
    for (size_t i = 0; i < grid_.N; ++i) {
        if (!(ps_[i] + r[i] > opts_.p_floor))
            throw std::domain_error("singularity guard");
        if (!(us_[i] + x[i] > -1e-300) || !std::isfinite(x[i]))
            throw std::domain_error("positivity guard");
    }
}

void Simulator::perturb(State& state, const PerturbationSpec& spec) const {
    if (spec.amplitude == 0.0) return;
    const size_t n = grid_.N;
    std::vector<double> dr(n, 0.0);
    for (size_t i = 0; i < n; ++i) {
        const double s = (xi_[i] - spec.center) / spec.width;
        double env = 0.0;
        if (spec.kind == PerturbationSpec::Kind::GaussianWeighted) {
            env = std::exp(-s * s);
        } else if (std::abs(s) < 1.0) {
            env = std::pow(1.0 - s * s, 3);
        }
        if (env == 0.0) continue;
        // delta p = e^{-a xi} eta^{-1} env cos(h xi); exponents combined in
        // log form so the right tail underflows gracefully.
        dr[i] = std::exp(-weights_.log_eta_exp_a(xi_[i])) * env *
                std::cos(spec.carrier_h * xi_[i]);
    }
    dr.front() = 0.0;
    dr.back() = 0.0;

    // Normalize so the D-norm contribution of (0, delta v) is exactly the
    // requested amplitude.
    State probe = state;
    probe.x.assign(n, 0.0);
    probe.r = dr;
    const double d = norms(probe).norm_D;
    if (!(d > 0.0)) throw std::invalid_argument("empty perturbation support");
    const double scale = spec.amplitude / d;
    for (size_t i = 0; i < n; ++i) state.r[i] += scale * dr[i];
    guard(state.x, state.r);
}

void Simulator::rhs_into(const std::vector<double>& x, const std::vector<double>& r,
                         std::vector<double>& xdot, std::vector<double>& rdot) const {
    const size_t n = grid_.N;
    xdot.resize(n);
    rdot.resize(n);
    xdot.front() = xdot.back() = rdot.front() = rdot.back() = 0.0;

    const double dx = grid_.dx;
    const double inv_dx = 1.0 / dx, inv_dx2 = 1.0 / (dx * dx);
    const double alpha = params_.alpha, chi = params_.chi, l = params_.l;
    const double mu = dq_.mu, nu = dq_.nu;
    const auto& d = params_.d;

    // Deviation flux at the interface between nodes i and i+1; exactly zero
    // when x = r = 0. Fused with the divergence pass to keep one sweep.
    const auto dflux = [&](size_t i) {
        const double xm = 0.5 * (x[i] + x[i + 1]);
        const double rm = 0.5 * (r[i] + r[i + 1]);
        const double Dx = (x[i + 1] - x[i]) * inv_dx;
        const double Dr = (r[i + 1] - r[i]) * inv_dx;
        const double k_tot = alpha + d.d(usm_[i] + xm);
        const double dd = delta_d(d, usm_[i], xm);
        const double chemo =
            (usm_[i] * (Dr - rp_[i] * rm) + xm * (dps_[i] + Dr)) / (psm_[i] + rm);
        return k_tot * Dx + dd * dus_[i] - chi * chemo;
    };

    double prev = dflux(0);
    for (size_t i = 1; i + 1 < n; ++i) {
        const double cur = dflux(i);
        xdot[i] = (cur - prev) * inv_dx;
        prev = cur;
        rdot[i] = (r[i + 1] - 2.0 * r[i] + r[i - 1]) * inv_dx2 +
                  mu * (r[i + 1] - r[i - 1]) * (0.5 * inv_dx) +
                  r[i] * (nu - l * us_[i]) - l * x[i] * (ps_[i] + r[i]);
    }
}

void Simulator::rhs(const State& state, std::vector<double>& xdot,
                    std::vector<double>& rdot) const {
    guard(state.x, state.r);
    rhs_into(state.x, state.r, xdot, rdot);
}

void Simulator::rhs_total(const std::vector<double>& u, const std::vector<double>& p,
                          std::vector<double>& udot, std::vector<double>& pdot) const {
    const size_t n = grid_.N;
    if (u.size() != n || p.size() != n) throw std::invalid_argument("field size mismatch");
    for (size_t i = 0; i < n; ++i)
        if (!(p[i] > opts_.p_floor)) throw std::domain_error("singularity guard");
    udot.assign(n, 0.0);
    pdot.assign(n, 0.0);
    const double dx = grid_.dx;
    const double alpha = params_.alpha, chi = params_.chi, l = params_.l;
    const double mu = dq_.mu, nu = dq_.nu;
    std::vector<double> flux(n - 1);
    for (size_t i = 0; i + 1 < n; ++i) {
        const double um = 0.5 * (u[i] + u[i + 1]);
        const double pm = 0.5 * (p[i] + p[i + 1]);
        const double Du = (u[i + 1] - u[i]) / dx;
        const double Dp = (p[i + 1] - p[i]) / dx;
        flux[i] = (alpha + params_.d.d(um)) * Du - chi * um * Dp / pm;
    }
    for (size_t i = 1; i + 1 < n; ++i) {
        udot[i] = (flux[i] - flux[i - 1]) / dx;
        pdot[i] = (p[i + 1] - 2.0 * p[i] + p[i - 1]) / (dx * dx) +
                  mu * (p[i + 1] - p[i - 1]) / (2.0 * dx) + p[i] * (nu - l * u[i]);
    }
}

double Simulator::max_dt(const State& state) const {
    double sup_k = std::max(params_.alpha, 1.0);
    if (params_.d.family != DiffusionPerturbation::Family::Zero)
        for (size_t i = 0; i < grid_.N; ++i)
            sup_k = std::max(sup_k, params_.alpha + params_.d.d(us_[i] + state.x[i]));
    return opts_.cfl * grid_.dx * grid_.dx / sup_k;
}

void Simulator::step(State& state, double dt) const {
    if (dt > max_dt(state) * (1.0 + 1e-12)) throw std::invalid_argument("CFL violated");
    guard(state.x, state.r);
    const size_t n = grid_.N;
    tx_.resize(n);
    tr_.resize(n);
    rhs_into(state.x, state.r, k1x_, k1r_);
    for (size_t i = 0; i < n; ++i) {
        tx_[i] = state.x[i] + 0.5 * dt * k1x_[i];
        tr_[i] = state.r[i] + 0.5 * dt * k1r_[i];
    }
    rhs_into(tx_, tr_, k2x_, k2r_);
    for (size_t i = 0; i < n; ++i) {
        tx_[i] = state.x[i] + 0.5 * dt * k2x_[i];
        tr_[i] = state.r[i] + 0.5 * dt * k2r_[i];
    }
    rhs_into(tx_, tr_, k3x_, k3r_);
    for (size_t i = 0; i < n; ++i) {
        tx_[i] = state.x[i] + dt * k3x_[i];
        tr_[i] = state.r[i] + dt * k3r_[i];
    }
    rhs_into(tx_, tr_, k4x_, k4r_);
    for (size_t i = 0; i < n; ++i) {
        state.x[i] += dt / 6.0 * (k1x_[i] + 2.0 * k2x_[i] + 2.0 * k3x_[i] + k4x_[i]);
        state.r[i] += dt / 6.0 * (k1r_[i] + 2.0 * k2r_[i] + 2.0 * k3r_[i] + k4r_[i]);
    }
    // Dirichlet pinning to the wave values.
    state.x.front() = state.x.back() = 0.0;
    state.r.front() = state.r.back() = 0.0;
    state.t += dt;
}

void Simulator::advance(State& state, double t_end) const {
    if (!(t_end > state.t + 1e-12)) return;
    // Uniform sub-steps within a slightly conservative CFL bound so the
    // endpoint is hit exactly; step() still enforces the hard bound.
    const double bound = 0.9 * max_dt(state);
    const double remaining = t_end - state.t;
    const size_t k = static_cast<size_t>(std::ceil(remaining / bound));
    const double dt = remaining / static_cast<double>(k);
    for (size_t j = 0; j < k; ++j) step(state, dt);
}

NormSample Simulator::norms(const State& state) const {
    const size_t n = grid_.N;
    const double a = dq_.a, dx = grid_.dx;
    std::vector<double> x1, x2, r1, r2;
    fd_jet(state.x, dx, x1, x2);
    fd_jet(state.r, dx, r1, r2);

    double X1 = 0, X1p = 0, X1pp = 0;
    double X2 = 0, X2p = 0, X2pp = 0;
    double minw = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < n; ++i) {
        X1 = std::max(X1, etap_[i] * std::abs(state.x[i]));
        X1p = std::max(X1p, etap_[i] * std::abs(x1[i]));
        X1pp = std::max(X1pp, etap_[i] * std::abs(x2[i]));
        // delta v and derivatives in the gauge: dv = e^{a xi} r, etc.
        const double dv = state.r[i];
        const double dvp = a * state.r[i] + r1[i];
        const double dvpp = a * a * state.r[i] + 2.0 * a * r1[i] + r2[i];
        X2 = std::max(X2, wfac_[i] * std::abs(dv));
        X2p = std::max(X2p, wfac_[i] * std::abs(dvp));
        X2pp = std::max(X2pp, wfac_[i] * std::abs(dvpp));
        minw = std::min(minw, wfac_[i] * (ps_[i] + state.r[i]));
    }
    NormSample s;
    s.t = state.t;
    s.norm_X = X1 + X2;
    s.norm_D = (X1 + X1p + X1pp) + (X2 + X2p + X2pp);
    s.min_weighted_v = minw;
    return s;
}

std::vector<double> Simulator::total_u(const State& state) const {
    std::vector<double> u(grid_.N);
    for (size_t i = 0; i < grid_.N; ++i) u[i] = us_[i] + state.x[i];
    return u;
}

std::vector<double> Simulator::total_p(const State& state) const {
    std::vector<double> p(grid_.N);
    for (size_t i = 0; i < grid_.N; ++i) p[i] = ps_[i] + state.r[i];
    return p;
}

InstabilityResult run_instability(const Simulator& sim, const PerturbationSpec& spec,
                                  double T, double record_dt, double predicted_rate,
                                  double sat_frac) {
    InstabilityResult res;
    res.predicted_rate = predicted_rate;
    res.A0 = spec.amplitude;

    Simulator::State state = sim.initial_state();
    sim.perturb(state, spec);
    res.trace.samples.push_back(sim.norms(state));
    const size_t n_rec = static_cast<size_t>(std::round(T / record_dt));
    for (size_t k = 1; k <= n_rec; ++k) {
        sim.advance(state, record_dt * static_cast<double>(k));
        res.trace.samples.push_back(sim.norms(state));
    }

    const double lo = 10.0 * spec.amplitude;
    const double hi = sat_frac * sim.wave_ref_norm();
    // Least-squares slope of log norm_D vs t over the growth window.
    double sw = 0, st = 0, sy = 0, stt = 0, sty = 0;
    size_t count = 0;
    for (const auto& s : res.trace.samples) {
        if (!(s.norm_D >= lo && s.norm_D <= hi)) continue;
        const double y = std::log(s.norm_D);
        sw += 1;
        st += s.t;
        sy += y;
        stt += s.t * s.t;
        sty += s.t * y;
        ++count;
    }
    if (count >= 5 && sw * stt - st * st > 0.0) {
        res.window_found = true;
        res.fitted_rate = (sw * sty - st * sy) / (sw * stt - st * st);
    }
    return res;
}

EscapeResult time_one_map_escape(const Simulator& sim, const PerturbationSpec& spec,
                                 double epsilon0, int n_max) {
    EscapeResult res;
    Simulator::State state = sim.initial_state();
    sim.perturb(state, spec);
    double norm = sim.norms(state).norm_D;
    res.log.emplace_back(0, norm);
    if (norm >= epsilon0) {
        res.escaped = true;
        res.n_escape = 0;
        return res;
    }
    for (int k = 1; k <= n_max; ++k) {
        sim.advance(state, static_cast<double>(k));
        norm = sim.norms(state).norm_D;
        res.log.emplace_back(k, norm);
        if (norm >= epsilon0) {
            res.escaped = true;
            res.n_escape = k;
            return res;
        }
    }
    return res;
}

}  // namespace chemowave
