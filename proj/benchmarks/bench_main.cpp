#include <benchmark/benchmark.h>

#include "dynsamp/dynsys.hpp"
#include "dynsamp/reconstruct.hpp"
#include "dynsamp/sampling.hpp"
#include "dynsamp/tensor3.hpp"

namespace {

using namespace dynsamp;

void BM_Dft3(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const Tensor3 t = random_tensor({20, 15, n}, 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(dft3(t));
}
BENCHMARK(BM_Dft3)->Arg(5)->Arg(16)->Arg(64);

void BM_Tprod(benchmark::State& state)
{
    const auto m = static_cast<std::size_t>(state.range(0));
    const Tensor3 a = random_tensor({m, m, 5}, 1);
    const Tensor3 b = random_tensor({m, 15, 5}, 2);
    for (auto _ : state)
        benchmark::DoNotOptimize(tprod(a, b));
}
BENCHMARK(BM_Tprod)->Arg(20)->Arg(80);

void BM_BcircOracle(benchmark::State& state)
{
    const Tensor3 a = random_tensor({20, 20, 5}, 1);
    const Tensor3 b = random_tensor({20, 15, 5}, 2);
    for (auto _ : state)
        benchmark::DoNotOptimize(bcirc_oracle(a, b));
}
BENCHMARK(BM_BcircOracle);

struct Instance {
    Tensor3 op = random_tensor({20, 20, 5}, 1);
    Tensor3 signal = random_tensor({20, 15, 5}, 2);
    SampleMask mask = bernoulli_mask({20, 15, 5}, 0.4, 3);
};

void BM_SolveColumn(benchmark::State& state)
{
    const Instance inst;
    const auto horizon = static_cast<std::size_t>(state.range(0));
    const SampleData data = observe(evolve(inst.op, inst.signal, horizon), inst.mask, 0.0, 0);
    const ColumnSystem sys = assemble_column_system(inst.op, inst.mask, data, 0);
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_column(sys));
}
BENCHMARK(BM_SolveColumn)->Arg(5)->Arg(15)->Unit(benchmark::kMillisecond);

void BM_Reconstruct(benchmark::State& state)
{
    const Instance inst;
    const SampleData data = observe(evolve(inst.op, inst.signal, 5), inst.mask, 0.0, 0);
    ReconstructOptions opt;
    opt.threads = static_cast<std::size_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(reconstruct(inst.op, inst.mask, data, opt));
}
BENCHMARK(BM_Reconstruct)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
