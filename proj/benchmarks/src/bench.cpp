#include <benchmark/benchmark.h>

#include "ortholap/energy.hpp"
#include "ortholap/fields.hpp"
#include "ortholap/scenario.hpp"
#include "ortholap/solver.hpp"
#include "ortholap/verify.hpp"

using namespace ortholap;

namespace {

ScalarField test_field(int n) {
    const Grid grid = build_grid(n, 2.0, {0.0, 0.0});
    const Scenario sc = make_scenario("oscillatory");
    return boundary_extension(ScalarField::sample(grid, sc.data));
}

void BM_Energy(benchmark::State& state) {
    const ScalarField u = test_field(static_cast<int>(state.range(0)));
    const EnergyParams params{1.5, 1e-3};
    for (auto _ : state) benchmark::DoNotOptimize(energy(u, params));
    state.SetItemsProcessed(state.iterations() * u.grid().cell_count());
}
BENCHMARK(BM_Energy)->Arg(65)->Arg(129)->Arg(257);

void BM_Residual(benchmark::State& state) {
    const ScalarField u = test_field(static_cast<int>(state.range(0)));
    const EnergyParams params{1.5, 1e-3};
    for (auto _ : state) benchmark::DoNotOptimize(residual(u, params));
    state.SetItemsProcessed(state.iterations() * u.grid().cell_count());
}
BENCHMARK(BM_Residual)->Arg(65)->Arg(129)->Arg(257);

void BM_HessianApply(benchmark::State& state) {
    const ScalarField u = test_field(static_cast<int>(state.range(0)));
    ScalarField d = ScalarField::sample(
        u.grid(), [](double x, double y) { return (1.0 - x * x) * (1.0 - y * y); });
    const EnergyParams params{1.5, 1e-3};
    for (auto _ : state) benchmark::DoNotOptimize(hessian_apply(u, params, d));
    state.SetItemsProcessed(state.iterations() * u.grid().cell_count());
}
BENCHMARK(BM_HessianApply)->Arg(65)->Arg(129)->Arg(257);

void BM_NodeDerivative(benchmark::State& state) {
    const ScalarField u = test_field(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(node_derivative(u, 1));
}
BENCHMARK(BM_NodeDerivative)->Arg(129)->Arg(257);

void BM_OscillationProfile(benchmark::State& state) {
    const ScalarField u = test_field(129);
    const std::vector<double> radii = radii_ladder(0.8, u.grid().h, 8, 4.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(oscillation_profile(u, 0.8, radii, 1.5, 1e-3));
}
BENCHMARK(BM_OscillationProfile);

void BM_SolveDirichlet(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Grid grid = build_grid(n, 2.0, {0.0, 0.0});
    const Scenario sc = make_scenario("oscillatory");
    const ScalarField boundary = ScalarField::sample(grid, sc.data);
    for (auto _ : state) {
        auto [u, rep] = solve_dirichlet(grid, boundary, {1.5, 1e-2}, SolveConfig{});
        benchmark::DoNotOptimize(rep.iterations);
    }
}
BENCHMARK(BM_SolveDirichlet)->Arg(33)->Arg(65)->Unit(benchmark::kMillisecond);

void BM_EpsilonLadder(benchmark::State& state) {
    const Grid grid = build_grid(33, 2.0, {0.0, 0.0});
    const Scenario sc = make_scenario("oscillatory");
    const ScalarField boundary = ScalarField::sample(grid, sc.data);
    for (auto _ : state) {
        auto [u, rep] = epsilon_ladder(grid, boundary, 1.5, 1e-2, 4, SolveConfig{}, 0.8);
        benchmark::DoNotOptimize(rep.all_converged);
    }
}
BENCHMARK(BM_EpsilonLadder)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
