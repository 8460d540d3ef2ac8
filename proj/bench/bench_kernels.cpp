#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "scatter/cavity.hpp"
#include "scatter/kernels.hpp"
#include "scatter/sweep.hpp"

using namespace scatter;

namespace {

std::vector<cplx> field(std::size_t n) {
    std::mt19937 rng(42);
    std::normal_distribution<double> g;
    std::vector<cplx> v(n);
    for (auto& x : v) x = cplx(g(rng), g(rng));
    return v;
}

void BM_AdvectSerial(benchmark::State& st) {
    auto r = field(st.range(0)), l = field(st.range(0));
    for (auto _ : st) {
        benchmark::DoNotOptimize(kernels::advect_serial(r, l));
    }
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_AdvectParallel(benchmark::State& st) {
    auto r = field(st.range(0)), l = field(st.range(0));
    std::vector<cplx> scratch;
    for (auto _ : st) {
        benchmark::DoNotOptimize(kernels::advect_parallel(r, l, scratch));
    }
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_ProbabilitySerial(benchmark::State& st) {
    const auto v = field(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(kernels::probability_serial(v));
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_ProbabilityParallel(benchmark::State& st) {
    const auto v = field(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(kernels::probability_parallel(v));
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

void sweep(benchmark::State& st, kernels::Exec exec) {
    auto spec = *find_preset("fig4a");
    spec.range.points = static_cast<int>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(run_sweep(spec, exec).rows.data());
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_SweepSerial(benchmark::State& st) { sweep(st, kernels::Exec::serial); }
void BM_SweepParallel(benchmark::State& st) { sweep(st, kernels::Exec::parallel); }

void trap(benchmark::State& st, kernels::Exec exec) {
    TrapPresetOptions o;
    o.bandwidth = 0.025;
    o.left_mod_energy = 5.0;
    const auto p = make_trap_protocol(o);
    auto s = init_grid(p.domain_length, p.dx, p.packet, p);
    s.exec = exec;
    const double dt = s.time_step();
    for (auto _ : st) step(s, p, dt);
    st.SetItemsProcessed(st.iterations() * static_cast<long>(s.cells()));
}

void BM_TrapStepSerial(benchmark::State& st) { trap(st, kernels::Exec::serial); }
void BM_TrapStepParallel(benchmark::State& st) { trap(st, kernels::Exec::parallel); }

}  // namespace

BENCHMARK(BM_AdvectSerial)->Arg(1 << 14)->Arg(1 << 18);
BENCHMARK(BM_AdvectParallel)->Arg(1 << 14)->Arg(1 << 18);
BENCHMARK(BM_ProbabilitySerial)->Arg(1 << 14)->Arg(1 << 18);
BENCHMARK(BM_ProbabilityParallel)->Arg(1 << 14)->Arg(1 << 18);
BENCHMARK(BM_SweepSerial)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrapStepSerial);
BENCHMARK(BM_TrapStepParallel);

BENCHMARK_MAIN();
