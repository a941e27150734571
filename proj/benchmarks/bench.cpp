#include <benchmark/benchmark.h>

#include "chemowave/simulator.hpp"
#include "chemowave/spectrum.hpp"

using namespace chemowave;

namespace {

ModelParams reference_params() {
    ModelParams p;
    p.d.family = DiffusionPerturbation::Family::Quadratic;
    p.d.coefficient = 0.3;
    return p;
}

void BM_derive(benchmark::State& state) {
    const ModelParams p;
    for (auto _ : state) benchmark::DoNotOptimize(derive(p));
}
BENCHMARK(BM_derive);

void BM_G_inverse_newton(benchmark::State& state) {
    const ScalarMaps maps(reference_params());
    double y = -40.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(maps.G_inverse(y));
        y = y >= 10.0 ? -40.0 : y + 0.37;
    }
}
BENCHMARK(BM_G_inverse_newton);

void BM_shoot(benchmark::State& state) {
    const ModelParams p;
    const DerivedQuantities dq = derive(p);
    const ScalarMaps maps(p);
    for (auto _ : state) benchmark::DoNotOptimize(shoot(dq, maps, {}));
}
BENCHMARK(BM_shoot)->Unit(benchmark::kMillisecond);

void BM_essential_curves(benchmark::State& state) {
    const ModelParams p;
    const DerivedQuantities dq = derive(p);
    const auto n = static_cast<size_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(essential_curves(p, dq, 3.0, -3.0, 3.0, n, 1));
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) *
                            static_cast<int64_t>(n));
}
BENCHMARK(BM_essential_curves)->Arg(601)->Arg(4801);

void BM_simulator_rhs(benchmark::State& state) {
    const ModelParams p;
    const DerivedQuantities dq = derive(p);
    const ScalarMaps maps(p);
    const WeightSpec weights(p, dq, 3.0);
    const Grid g = Grid::make(-30.0, 40.0, static_cast<size_t>(state.range(0)));
    const WaveProfile w = assemble(shoot(dq, maps, {}), dq, maps, g.L_minus, g.L_plus, g.N);
    const Simulator sim(p, dq, w, weights, g);
    Simulator::State st = sim.initial_state();
    PerturbationSpec spec;
    sim.perturb(st, spec);
    std::vector<double> xd(g.N), rd(g.N);
    for (auto _ : state) {
        sim.rhs(st, xd, rd);
        benchmark::DoNotOptimize(xd.data());
        benchmark::DoNotOptimize(rd.data());
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) *
                            static_cast<int64_t>(g.N));
}
BENCHMARK(BM_simulator_rhs)->Arg(1 << 12)->Arg(1 << 13);

void BM_simulator_step(benchmark::State& state) {
    const ModelParams p;
    const DerivedQuantities dq = derive(p);
    const ScalarMaps maps(p);
    const WeightSpec weights(p, dq, 3.0);
    const Grid g = Grid::make(-30.0, 40.0, static_cast<size_t>(state.range(0)));
    const WaveProfile w = assemble(shoot(dq, maps, {}), dq, maps, g.L_minus, g.L_plus, g.N);
    const Simulator sim(p, dq, w, weights, g);
    Simulator::State st = sim.initial_state();
    PerturbationSpec spec;
    sim.perturb(st, spec);
    const double dt = 0.5 * sim.max_dt(st);
    for (auto _ : state) sim.step(st, dt);
}
BENCHMARK(BM_simulator_step)->Arg(1 << 12)->Arg(1 << 13)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
