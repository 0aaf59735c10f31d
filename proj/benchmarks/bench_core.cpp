#include <benchmark/benchmark.h>

#include <sisdde/analysis.hpp>
#include <sisdde/normalform.hpp>
#include <sisdde/simulator.hpp>

using namespace sisdde;

namespace {

ModelParams endemic(double d2 = 0.2) {
    return {2.1, 0.5, 0.5, 0.1, 0.3, 1.0, 0.52, 0.05, d2, 0.06, 3.0};
}

void BM_LaplacianNeumann(benchmark::State& state) {
    const std::size_t n = std::size_t(state.range(0));
    std::vector<double> u(n, 1.0), out(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = std::cos(0.05 * double(i));
    for (auto _ : state) {
        laplacian_neumann(u, 0.05, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * int64_t(n));
}
BENCHMARK(BM_LaplacianNeumann)->Arg(192)->Arg(768);

void BM_FirstHopf(benchmark::State& state) {
    const auto p = endemic(0.2); // 22 crossing modes
    for (auto _ : state) {
        auto fh = first_hopf(p);
        benchmark::DoNotOptimize(fh);
    }
}
BENCHMARK(BM_FirstHopf);

void BM_HopfProperties(benchmark::State& state) {
    const auto p = endemic(double(state.range(0)) / 10.0);
    for (auto _ : state) {
        auto nf = hopf_properties(p);
        benchmark::DoNotOptimize(nf);
    }
}
BENCHMARK(BM_HopfProperties)->Arg(2)->Arg(55); // homogeneous and mode-1 rows

void BM_SimulationSteps(benchmark::State& state) {
    const auto p = endemic();
    SimConfig cfg;
    cfg.grid_points = int(state.range(0));
    cfg.dt = 0.005;
    cfg.t_end = 5.0;
    cfg.record_every = 1 << 20;
    cfg.initial = {{{1.2, 0.01, 1.0}, {5.8, -0.06, 1.0}, {4.2, -0.05, 1.0}}};
    for (auto _ : state) {
        auto traj = run_simulation(p, cfg);
        benchmark::DoNotOptimize(traj);
    }
    state.SetItemsProcessed(state.iterations() * int64_t(cfg.t_end / cfg.dt));
}
BENCHMARK(BM_SimulationSteps)->Arg(96)->Arg(192);

void BM_SweepPoint(benchmark::State& state) {
    const auto base = endemic(1.0);
    const std::vector<double> grid = log_grid(0.01, 100.0, 12);
    for (auto _ : state) {
        auto sw = sweep_d2(base, grid);
        benchmark::DoNotOptimize(sw);
    }
}
BENCHMARK(BM_SweepPoint);

} // namespace

BENCHMARK_MAIN();
