// Serial reference vs OpenMP for the three data-parallel kernels.
// Backend is the first benchmark argument: 0 serial, 1 openmp.

#include <benchmark/benchmark.h>

#include "dqpt/kernels.hpp"

using namespace dqpt;

namespace {

kernels::Backend backend(const benchmark::State& state) {
    return state.range(0) == 0 ? kernels::Backend::serial : kernels::Backend::openmp;
}

void BM_RateSeries(benchmark::State& state) {
    QuenchSpec spec;
    spec.n_spins = static_cast<int>(state.range(1));
    const LoschmidtTable table = loschmidt_table(spec);
    const auto times = linspace(0, 5, 2000);
    for (auto _ : state) benchmark::DoNotOptimize(kernels::rate_series(table, times, backend(state)));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(times.size() * table.size()));
}

void BM_EchoSurfaces(benchmark::State& state) {
    QuenchSpec spec;
    spec.n_spins = static_cast<int>(state.range(1));
    const ModeEnsemble ens = build_ensemble(spec);
    const auto phis = phi_grid(64);
    const auto times = linspace(0, 5, 101);
    for (auto _ : state)
        benchmark::DoNotOptimize(kernels::echo_surfaces(ens, phis, times, Aggregation::mean,
                                                        TimeAxis::absolute, backend(state)));
}

void BM_ApplyHamiltonian(benchmark::State& state) {
    const ChainOperator op(static_cast<int>(state.range(1)), 1.2, Boundary::periodic);
    std::vector<Complex> in(op.dimension(), Complex{1.0, 0.0}), out(op.dimension());
    for (auto _ : state) {
        kernels::apply_hamiltonian(op, in, out, backend(state));
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(op.dimension()));
}

}  // namespace

BENCHMARK(BM_RateSeries)->ArgsProduct({{0, 1}, {30, 1000}});
BENCHMARK(BM_EchoSurfaces)->ArgsProduct({{0, 1}, {30}});
BENCHMARK(BM_ApplyHamiltonian)->ArgsProduct({{0, 1}, {10, 14}});

BENCHMARK_MAIN();
