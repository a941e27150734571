#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "chemowave/io.hpp"
#include "chemowave/linearization.hpp"
#include "chemowave/simulator.hpp"
#include "chemowave/spectrum.hpp"
#include "chemowave/wave.hpp"
#include "chemowave/weights.hpp"

namespace cw = chemowave;
using nlohmann::json;

namespace {

// Exit-code contract: 0 ok, 1 config error, 2 no result, 3 guard violation.
constexpr int kOk = 0, kConfigError = 1, kNoResult = 2, kGuard = 3;

struct RunConfig {
    cw::ModelParams model;
    double w_plus = 3.0;
    cw::OrbitOptions wave;
    double r1_tol = 1e-6, r2_tol = 1e-5, rate_tol = 1e-2;
    cw::Grid grid = cw::Grid::make(-30.0, 40.0, 8192);
    double h_min = -3.0, h_max = 3.0;
    size_t n_samples = 601;
    double T = 8.0, cfl = 0.4, record_dt = 0.05, sat_frac = 1e-3;
    cw::PerturbationSpec perturbation;
    double escape_epsilon0 = 1e-2;
    int escape_n_max = 30;
    std::string out_dir = "out";
    bool emit_svg = false;
};

[[noreturn]] void config_error(const std::string& msg) {
    throw std::invalid_argument(msg);
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> known) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (std::find_if(known.begin(), known.end(), [&](const char* k) {
                return key == k;
            }) == known.end())
            config_error("unknown config key: " + path + key);
    }
}

template <typename T>
void read(const json& obj, const char* key, T& target) {
    if (obj.contains(key)) obj.at(key).get_to(target);
}

RunConfig parse_config(const json& root) {
    RunConfig cfg;
    check_keys(root, "", {"model", "weight", "wave", "grid", "spectrum", "sim", "output"});

    if (root.contains("model")) {
        const json& m = root.at("model");
        check_keys(m, "model.", {"alpha", "chi", "gamma", "l", "c", "d"});
        read(m, "alpha", cfg.model.alpha);
        read(m, "chi", cfg.model.chi);
        read(m, "gamma", cfg.model.gamma);
        read(m, "l", cfg.model.l);
        read(m, "c", cfg.model.c);
        if (m.contains("d")) {
            const json& d = m.at("d");
            check_keys(d, "model.d.", {"family", "coefficient"});
            std::string family = "zero";
            read(d, "family", family);
            if (family == "zero")
                cfg.model.d.family = cw::DiffusionPerturbation::Family::Zero;
            else if (family == "linear")
                cfg.model.d.family = cw::DiffusionPerturbation::Family::Linear;
            else if (family == "quadratic")
                cfg.model.d.family = cw::DiffusionPerturbation::Family::Quadratic;
            else
                config_error("unknown diffusion family: model.d.family = " + family);
            read(d, "coefficient", cfg.model.d.coefficient);
        }
    }
    if (root.contains("weight")) {
        const json& w = root.at("weight");
        check_keys(w, "weight.", {"w_plus"});
        read(w, "w_plus", cfg.w_plus);
    }
    if (root.contains("wave")) {
        const json& w = root.at("wave");
        check_keys(w, "wave.",
                   {"eps0_rel", "rk_tol", "p_stop", "xi_span_max", "max_step", "r1_tol",
                    "r2_tol", "rate_tol"});
        read(w, "eps0_rel", cfg.wave.eps0_rel);
        read(w, "rk_tol", cfg.wave.rk_tol);
        read(w, "p_stop", cfg.wave.p_stop);
        read(w, "xi_span_max", cfg.wave.xi_span_max);
        read(w, "max_step", cfg.wave.max_step);
        read(w, "r1_tol", cfg.r1_tol);
        read(w, "r2_tol", cfg.r2_tol);
        read(w, "rate_tol", cfg.rate_tol);
    }
    if (root.contains("grid")) {
        const json& g = root.at("grid");
        check_keys(g, "grid.", {"L_minus", "L_plus", "N"});
        double lm = cfg.grid.L_minus, lp = cfg.grid.L_plus;
        size_t n = cfg.grid.N;
        read(g, "L_minus", lm);
        read(g, "L_plus", lp);
        read(g, "N", n);
        cfg.grid = cw::Grid::make(lm, lp, n);
    }
    if (root.contains("spectrum")) {
        const json& s = root.at("spectrum");
        check_keys(s, "spectrum.", {"h_min", "h_max", "n_samples"});
        read(s, "h_min", cfg.h_min);
        read(s, "h_max", cfg.h_max);
        read(s, "n_samples", cfg.n_samples);
    }
    if (root.contains("sim")) {
        const json& s = root.at("sim");
        check_keys(s, "sim.",
                   {"T", "cfl", "record_dt", "sat_frac", "perturbation", "escape"});
        read(s, "T", cfg.T);
        read(s, "cfl", cfg.cfl);
        read(s, "record_dt", cfg.record_dt);
        read(s, "sat_frac", cfg.sat_frac);
        if (s.contains("perturbation")) {
            const json& p = s.at("perturbation");
            check_keys(p, "sim.perturbation.",
                       {"kind", "amplitude", "center", "width", "carrier_h"});
            std::string kind = "fourier_windowed";
            read(p, "kind", kind);
            if (kind == "gaussian_weighted")
                cfg.perturbation.kind = cw::PerturbationSpec::Kind::GaussianWeighted;
            else if (kind == "fourier_windowed")
                cfg.perturbation.kind = cw::PerturbationSpec::Kind::FourierWindowed;
            else
                config_error("unknown perturbation kind: " + kind);
            read(p, "amplitude", cfg.perturbation.amplitude);
            read(p, "center", cfg.perturbation.center);
            read(p, "width", cfg.perturbation.width);
            read(p, "carrier_h", cfg.perturbation.carrier_h);
        }
        if (s.contains("escape")) {
            const json& e = s.at("escape");
            check_keys(e, "sim.escape.", {"epsilon0", "n_max"});
            read(e, "epsilon0", cfg.escape_epsilon0);
            read(e, "n_max", cfg.escape_n_max);
        }
    }
    if (root.contains("output")) {
        const json& o = root.at("output");
        check_keys(o, "output.", {"dir", "emit_svg"});
        read(o, "dir", cfg.out_dir);
        read(o, "emit_svg", cfg.emit_svg);
    }
    return cfg;
}

json effective_config(const RunConfig& cfg) {
    const char* family =
        cfg.model.d.family == cw::DiffusionPerturbation::Family::Zero     ? "zero"
        : cfg.model.d.family == cw::DiffusionPerturbation::Family::Linear ? "linear"
                                                                          : "quadratic";
    const char* kind = cfg.perturbation.kind == cw::PerturbationSpec::Kind::GaussianWeighted
                           ? "gaussian_weighted"
                           : "fourier_windowed";
    return json{
        {"model",
         {{"alpha", cfg.model.alpha},
          {"chi", cfg.model.chi},
          {"gamma", cfg.model.gamma},
          {"l", cfg.model.l},
          {"c", cfg.model.c},
          {"d", {{"family", family}, {"coefficient", cfg.model.d.coefficient}}}}},
        {"weight", {{"w_plus", cfg.w_plus}}},
        {"wave",
         {{"eps0_rel", cfg.wave.eps0_rel},
          {"rk_tol", cfg.wave.rk_tol},
          {"p_stop", cfg.wave.p_stop},
          {"xi_span_max", cfg.wave.xi_span_max},
          {"max_step", cfg.wave.max_step},
          {"r1_tol", cfg.r1_tol},
          {"r2_tol", cfg.r2_tol},
          {"rate_tol", cfg.rate_tol}}},
        {"grid", {{"L_minus", cfg.grid.L_minus}, {"L_plus", cfg.grid.L_plus}, {"N", cfg.grid.N}}},
        {"spectrum", {{"h_min", cfg.h_min}, {"h_max", cfg.h_max}, {"n_samples", cfg.n_samples}}},
        {"sim",
         {{"T", cfg.T},
          {"cfl", cfg.cfl},
          {"record_dt", cfg.record_dt},
          {"sat_frac", cfg.sat_frac},
          {"perturbation",
           {{"kind", kind},
            {"amplitude", cfg.perturbation.amplitude},
            {"center", cfg.perturbation.center},
            {"width", cfg.perturbation.width},
            {"carrier_h", cfg.perturbation.carrier_h}}},
          {"escape", {{"epsilon0", cfg.escape_epsilon0}, {"n_max", cfg.escape_n_max}}}}},
        {"output", {{"dir", cfg.out_dir}, {"emit_svg", cfg.emit_svg}}}};
}

unsigned thread_cap() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("CHEMOWAVE_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1)
            config_error("CHEMOWAVE_THREADS must be a positive integer");
        hw = std::min<unsigned>(hw, static_cast<unsigned>(v));
    }
    return hw;
}

void prepare_out(const RunConfig& cfg) {
    std::filesystem::create_directories(cfg.out_dir);
    std::ofstream echo(cfg.out_dir + "/effective_config.json");
    echo << effective_config(cfg).dump(2) << "\n";
}

cw::WaveProfile build_wave(const RunConfig& cfg, const cw::DerivedQuantities& dq) {
    cw::ScalarMaps maps(cfg.model, {});
    cw::RawOrbit raw = cw::shoot(dq, maps, cfg.wave);
    return cw::assemble(raw, dq, maps, cfg.grid.L_minus, cfg.grid.L_plus, cfg.grid.N);
}

int cmd_check(const RunConfig& cfg) {
    const auto violations = cw::validate(cfg.model);
    for (const auto& v : violations) std::cout << "violation: " << v << "\n";
    if (!violations.empty()) return kConfigError;
    const cw::DerivedQuantities dq = cw::derive(cfg.model);
    std::cout << "a = " << dq.a << ", mu = " << dq.mu << ", nu = " << dq.nu << "\n"
              << "kappa_plus = " << dq.kappa_plus << ", kappa_minus = " << dq.kappa_minus
              << "\n"
              << "p0 = " << dq.p0 << ", u_minus = " << dq.u_minus << "\n"
              << "J = [" << dq.J_lo << ", " << dq.J_hi << "], Ju = (" << dq.Ju_lo << ", "
              << dq.J_hi << "]\n"
              << "(R1) holds: " << (cw::check_R1(cfg.model) ? "yes" : "no") << "\n";
    if (!(cfg.w_plus >= dq.J_lo && cfg.w_plus <= dq.J_hi)) {
        std::cout << "w_plus outside J\n";
        return kConfigError;
    }
    const double vmax = cw::max_unstable_real_part(cfg.model, cfg.w_plus);
    std::cout << "w_plus = " << cfg.w_plus
              << ", admits instability (R2): " << (cw::check_R2(cfg.model, cfg.w_plus) ? "yes" : "no")
              << "\n"
              << "max Re on S2 = " << vmax << "\n";
    return kOk;
}

int cmd_wave(const RunConfig& cfg) {
    const cw::DerivedQuantities dq = cw::derive(cfg.model);
    cw::ScalarMaps maps(cfg.model, {});
    const cw::WaveProfile w = build_wave(cfg, dq);
    prepare_out(cfg);

    std::vector<std::vector<double>> rows;
    rows.reserve(w.xi.size());
    for (size_t i = 0; i < w.xi.size(); ++i)
        rows.push_back({w.xi[i], w.p_star[i], w.q_star[i], w.u_star[i], w.v_star[i],
                        w.u_prime[i], w.v_prime[i], w.v_double_prime[i]});
    cw::write_csv(cfg.out_dir + "/wave.csv",
                  {"xi", "p", "q", "u", "v", "u_prime", "v_prime", "v_double_prime"}, rows);
    if (cfg.emit_svg)
        cw::write_svg(cfg.out_dir + "/wave.svg", "travelling wave (u front, v pulse)",
                      {{"u", "#1f77b4", w.xi, w.u_star}, {"v", "#d62728", w.xi, w.v_star}});

    const auto res = cw::residual(w, cfg.model, dq, maps);
    std::cout << "residual r1 = " << res[0] << " (tol " << cfg.r1_tol << ")\n"
              << "residual r2 = " << res[1] << " (tol " << cfg.r2_tol << ")\n";
    bool ok = res[0] <= cfg.r1_tol && res[1] <= cfg.r2_tol;
    for (const auto& fit : cw::measure_rates(w, dq, cfg.model)) {
        const double err = std::abs(fit.fitted - fit.target);
        std::cout << "rate " << fit.side << " " << fit.quantity << ": fitted " << fit.fitted
                  << " target " << fit.target << " |err| " << err << "\n";
        ok = ok && err <= cfg.rate_tol;
    }
    return ok ? kOk : kNoResult;
}

int cmd_spectrum(const RunConfig& cfg) {
    const cw::DerivedQuantities dq = cw::derive(cfg.model);
    cw::WeightSpec weights(cfg.model, dq, cfg.w_plus);  // validates w_plus in J
    (void)weights;
    const auto pts = cw::essential_curves(cfg.model, dq, cfg.w_plus, cfg.h_min, cfg.h_max,
                                          cfg.n_samples, thread_cap());
    prepare_out(cfg);
    std::vector<std::vector<double>> rows;
    rows.reserve(pts.size());
    for (const auto& p : pts)
        rows.push_back({p.h, p.S1.real(), p.S1.imag(), p.S2.real(), p.S2.imag()});
    cw::write_csv(cfg.out_dir + "/spectrum.csv", {"h", "re_S1", "im_S1", "re_S2", "im_S2"},
                  rows);
    if (cfg.emit_svg) {
        cw::PlotSeries s1{"S1", "#1f77b4", {}, {}}, s2{"S2", "#d62728", {}, {}};
        for (const auto& p : pts) {
            s1.x.push_back(p.S1.real());
            s1.y.push_back(p.S1.imag());
            s2.x.push_back(p.S2.real());
            s2.y.push_back(p.S2.imag());
        }
        cw::write_svg(cfg.out_dir + "/spectrum.svg", "partial essential spectrum (S1, S2)",
                      {s1, s2});
    }
    const double vmax = cw::max_unstable_real_part(cfg.model, cfg.w_plus);
    if (vmax > 0.0)
        std::cout << "Re_max(S2) = " << vmax << "\n";
    else
        std::cout << "Re_max(S2) = " << vmax << " (stable window for this weight)\n";
    return kOk;
}

int cmd_simulate(const RunConfig& cfg) {
    const cw::DerivedQuantities dq = cw::derive(cfg.model);
    cw::WeightSpec weights(cfg.model, dq, cfg.w_plus);
    const cw::WaveProfile w = build_wave(cfg, dq);
    cw::SimOptions sopts;
    sopts.cfl = cfg.cfl;
    cw::Simulator sim(cfg.model, dq, w, weights, cfg.grid, sopts);
    const double predicted = cw::max_unstable_real_part(cfg.model, cfg.w_plus);
    const cw::InstabilityResult res =
        cw::run_instability(sim, cfg.perturbation, cfg.T, cfg.record_dt, predicted, cfg.sat_frac);

    prepare_out(cfg);
    std::vector<std::vector<double>> rows;
    rows.reserve(res.trace.samples.size());
    for (const auto& s : res.trace.samples)
        rows.push_back({s.t, s.norm_X, s.norm_D, s.min_weighted_v});
    cw::write_csv(cfg.out_dir + "/norms.csv", {"t", "norm_X", "norm_D", "min_weighted_v"},
                  rows);
    if (cfg.emit_svg) {
        cw::PlotSeries sd{"log10 norm_D", "#1f77b4", {}, {}};
        for (const auto& s : res.trace.samples) {
            sd.x.push_back(s.t);
            sd.y.push_back(std::log10(std::max(s.norm_D, 1e-300)));
        }
        cw::write_svg(cfg.out_dir + "/norms.svg", "perturbation growth", {sd});
    }
    if (!res.window_found) {
        std::cout << "no growth window\n";
        return kNoResult;
    }
    std::cout << "fitted rate " << res.fitted_rate << ", predicted " << res.predicted_rate
              << "\n";
    return kOk;
}

int cmd_escape(const RunConfig& cfg) {
    const cw::DerivedQuantities dq = cw::derive(cfg.model);
    cw::WeightSpec weights(cfg.model, dq, cfg.w_plus);
    const cw::WaveProfile w = build_wave(cfg, dq);
    cw::SimOptions sopts;
    sopts.cfl = cfg.cfl;
    cw::Simulator sim(cfg.model, dq, w, weights, cfg.grid, sopts);
    const cw::EscapeResult res =
        cw::time_one_map_escape(sim, cfg.perturbation, cfg.escape_epsilon0, cfg.escape_n_max);

    prepare_out(cfg);
    std::vector<std::vector<double>> rows;
    rows.reserve(res.log.size());
    for (const auto& [n, norm] : res.log)
        rows.push_back({static_cast<double>(n), norm});
    cw::write_csv(cfg.out_dir + "/escape.csv", {"n", "norm_D"}, rows);
    if (res.escaped) {
        std::cout << "escaped at n = " << res.n_escape << " (epsilon0 = " << cfg.escape_epsilon0
                  << ")\n";
        return kOk;
    }
    std::cout << "no escape within " << cfg.escape_n_max << " iterations\n";
    return kNoResult;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"travelling waves, essential spectrum and nonlinear instability "
                 "of a chemotaxis model with nonlinear diffusion"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out_override;
    bool svg_override = false;
    app.add_option("--config", config_path, "JSON configuration file");
    app.add_option("--out", out_override, "output directory (overrides config)");
    app.add_flag("--svg", svg_override, "emit SVG plots");

    auto* c_check = app.add_subcommand("check", "validate parameters and report derived quantities");
    auto* c_wave = app.add_subcommand("wave", "construct the travelling wave, write wave.csv");
    auto* c_spectrum = app.add_subcommand("spectrum", "sample S1/S2 curves, write spectrum.csv");
    auto* c_simulate = app.add_subcommand("simulate", "perturbation-growth run, write norms.csv");
    auto* c_escape = app.add_subcommand("escape", "time-one-map escape run, write escape.csv");

    CLI11_PARSE(app, argc, argv);

    try {
        json root = json::object();
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) {
                std::cerr << "error: cannot read config file " << config_path << "\n";
                return kConfigError;
            }
            try {
                in >> root;
            } catch (const json::exception& e) {
                std::cerr << "error: malformed JSON: " << e.what() << "\n";
                return kConfigError;
            }
        }
        RunConfig cfg = parse_config(root);
        if (!out_override.empty()) cfg.out_dir = out_override;
        if (svg_override) cfg.emit_svg = true;

        if (c_check->parsed()) return cmd_check(cfg);
        if (c_wave->parsed()) return cmd_wave(cfg);
        if (c_spectrum->parsed()) return cmd_spectrum(cfg);
        if (c_simulate->parsed()) return cmd_simulate(cfg);
        if (c_escape->parsed()) return cmd_escape(cfg);
        return kConfigError;
    } catch (const std::domain_error& e) {
        std::cerr << "guard: " << e.what() << "\n";
        return kGuard;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNoResult;
    }
}
