#include <benchmark/benchmark.h>

#include <random>

#include "fcf/fcfb.hpp"
#include "fcf/metrics.hpp"
#include "fcf/ofdm.hpp"
#include "fcf/optimizer.hpp"

using namespace fcf;

namespace {

FcConfig example1_cfg(int n_symbols) {
    SubbandConfig sb;
    sb.n_prb = 2;
    sb.l_act = 24;
    sb.scs_hz = Rational(15000);
    sb.l_ofdm = 128;
    sb.l_cp = 9;
    sb.n_symbols = n_symbols;
    return derive_fc_params({sb}, 128, Rational(1, 2), Rational(7680000));
}

FcConfig wideband_cfg(int n_symbols) {
    SubbandConfig sb;
    sb.n_prb = 25;
    sb.l_act = 300;
    sb.scs_hz = Rational(15000);
    sb.l_ofdm = 1024;
    sb.l_cp = 72;
    sb.n_symbols = n_symbols;
    return derive_fc_params({sb}, 2048, Rational(1, 2), Rational(122880000));
}

void bench_synthesize(benchmark::State& state, FcConfig cfg) {
    FcBlockPipeline p(cfg, ols_windows(cfg));
    const SymbolGrid g = random_qam_grid(cfg.subbands[0].l_act, cfg.subbands[0].n_symbols, 2, 1);
    const cvec burst = cp_ofdm_modulate(g, cfg.subbands[0].l_ofdm, cfg.subbands[0].l_cp);
    for (auto _ : state) {
        const ComplexSignal out = fc_synthesize({burst}, p);
        benchmark::DoNotOptimize(out.samples.data());
    }
    const double samples = static_cast<double>(cfg.per_subband[0].interp) *
                           static_cast<double>(cfg.per_subband[0].t_len);
    state.SetItemsProcessed(static_cast<std::int64_t>(samples) * state.iterations());
}

void BM_SynthesizeNarrow(benchmark::State& state) { bench_synthesize(state, example1_cfg(14)); }
void BM_SynthesizeWideband(benchmark::State& state) { bench_synthesize(state, wideband_cfg(14)); }

void BM_ChainEvaluate(benchmark::State& state) {
    OptimizationScenario sc;
    sc.cfg = example1_cfg(14);
    sc.flags = table_case(5);
    fill_scenario_defaults(sc);
    const rvec x = initial_params(sc);
    for (auto _ : state) {
        const EvalResult ev = evaluate(x, sc);
        benchmark::DoNotOptimize(ev.objective);
    }
}

void BM_ScrMeasurement(benchmark::State& state) {
    FcConfig cfg = example1_cfg(100);
    FcBlockPipeline p(cfg, ols_windows(cfg));
    const SymbolGrid g = random_qam_grid(24, 100, 2, 1);
    const cvec burst = cp_ofdm_modulate(g, 128, 9);
    const ComplexSignal out = fc_synthesize({burst}, p);
    const MeasurementFilter mf = design_measurement_filter(cfg.fs_hz);
    const Rational half = Rational(24) * Rational(15000) / Rational(2);
    ScrAnalyzer an(out.samples.size(), cfg.fs_hz, Rational(0) - half, half, Side::Right, mf);
    for (auto _ : state) benchmark::DoNotOptimize(an.measure_db(out.samples));
}

} // namespace

BENCHMARK(BM_SynthesizeNarrow);
BENCHMARK(BM_SynthesizeWideband);
BENCHMARK(BM_ChainEvaluate);
BENCHMARK(BM_ScrMeasurement);
BENCHMARK_MAIN();
