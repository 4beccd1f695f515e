#include <benchmark/benchmark.h>

#include "pulsebench/dynamics.hpp"
#include "pulsebench/metrics.hpp"
#include "pulsebench/protocols.hpp"

using namespace pulsebench;

static void BM_NoiseEvaluate(benchmark::State& state) {
    const auto tr = NoiseTrace::synthesize(LorentzianNoiseSpec{static_cast<int>(state.range(0)), 0.2, 0.5, 0.5, -5.0, 5.0, 1});
    double t = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(tr(t));
        t += 1e-3;
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_NoiseEvaluate)->Arg(100)->Arg(1000)->Arg(10000);

static void BM_LindbladRhs(benchmark::State& state) {
    const auto dim = static_cast<std::size_t>(state.range(0));
    const Operator h = build_static(SystemSpec{dim, std::vector<double>(dim, 4.8), {}})(0.0);
    const auto c = collapse_operators(LindbladSpec::uniform(dim, 0.01, 0.01), dim);
    const Operator rho = make_initial_state(GhzState{dim}).matrix();
    for (auto _ : state) benchmark::DoNotOptimize(lindblad_rhs(h, rho, c));
}
BENCHMARK(BM_LindbladRhs)->Arg(2)->Arg(3)->Arg(4);

static void BM_ShapedPulseScenario(benchmark::State& state) {
    ScenarioConfig cfg;
    cfg.seed = 1;
    cfg.t_end = 2.0;
    cfg.n_steps = 12;
    for (auto _ : state) benchmark::DoNotOptimize(run_protocol(ProtocolKind::SinglePulse, cfg));
}
BENCHMARK(BM_ShapedPulseScenario)->Unit(benchmark::kMillisecond);

static void BM_Concurrence(benchmark::State& state) {
    const Operator rho = make_initial_state(BellState{BellKind::PhiPlus}).matrix() * 0.9 + Operator::Identity(4, 4) * 0.025;
    for (auto _ : state) benchmark::DoNotOptimize(concurrence(rho));
}
BENCHMARK(BM_Concurrence);

BENCHMARK_MAIN();
