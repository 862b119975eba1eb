#include <benchmark/benchmark.h>

#include "magphon/encircle.hpp"
#include "magphon/ep_spectral.hpp"
#include "magphon/noise_spectrum.hpp"
#include "magphon/presets.hpp"

namespace {

using namespace magphon;

void BM_Eigenpairs(benchmark::State& state) {
    const Matrix2c h = build_hamiltonian(find_preset("fig5").settings.system).h;
    for (auto _ : state) benchmark::DoNotOptimize(eigenpairs(h));
}
BENCHMARK(BM_Eigenpairs);

void BM_BuildHamiltonian(benchmark::State& state) {
    const SystemConfig c = find_preset("fig5").settings.system;
    for (auto _ : state) benchmark::DoNotOptimize(build_hamiltonian(c));
}
BENCHMARK(BM_BuildHamiltonian);

void BM_PsdPoint(benchmark::State& state) {
    const Settings& s = find_preset("fig4b").settings;
    for (auto _ : state) benchmark::DoNotOptimize(psd(0.9e9, s.system, s.noise));
}
BENCHMARK(BM_PsdPoint);

void BM_PsdRow(benchmark::State& state) {
    const Settings& s = find_preset("fig4a").settings;
    const auto omega = s.omega_axis.values();
    const std::vector<double> row{0.0};
    for (auto _ : state) benchmark::DoNotOptimize(psd_map(s.system, omega, row, s.swept, s.noise, 1));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(omega.size()));
}
BENCHMARK(BM_PsdRow);

void BM_PsdMap(benchmark::State& state) {
    const Settings& s = find_preset("fig4a").settings;
    const auto omega = s.omega_axis.values();
    const auto detuning = s.detuning_axis.values();
    const auto jobs = static_cast<unsigned>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(psd_map(s.system, omega, detuning, s.swept, s.noise, jobs));
}
BENCHMARK(BM_PsdMap)->Arg(1)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);

void BM_FindExceptionalPoints(benchmark::State& state) {
    const Settings& s = find_preset("fig5").settings;
    EpSolverOptions opt;
    opt.seeds_per_axis = s.ep_seeds_per_axis;
    for (auto _ : state) benchmark::DoNotOptimize(find_exceptional_points(s.plane(), s.region(), opt));
}
BENCHMARK(BM_FindExceptionalPoints)->Unit(benchmark::kMillisecond);

void BM_RiemannSurface(benchmark::State& state) {
    const Settings& s = find_preset("fig5").settings;
    const auto p = s.p_axis.values();
    const auto d = s.delta_axis.values();
    for (auto _ : state) benchmark::DoNotOptimize(riemann_surface(s.plane(), p, d));
}
BENCHMARK(BM_RiemannSurface)->Unit(benchmark::kMillisecond);

void BM_EvolveLoop(benchmark::State& state) {
    const Settings& s = find_preset("fig6c").settings;
    LoopSpec loop = s.loop;
    loop.samples = static_cast<std::size_t>(state.range(0));
    const ParameterPlane plane = s.plane();
    const Vector2c start = select_initial_state(initial_basis(loop, plane), s.initial);
    for (auto _ : state) benchmark::DoNotOptimize(evolve(loop, plane, start, s.evolve));
}
BENCHMARK(BM_EvolveLoop)->Arg(65)->Arg(513)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
