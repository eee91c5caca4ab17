#include <benchmark/benchmark.h>

#include <cmath>
#include <omp.h>
#include <random>

#include "qwalk/ensemble.hpp"
#include "qwalk/evolution.hpp"

using namespace qwalk;

namespace {

// Dense state over |x| <= T/2 on a lattice of half-width T, so T/2 steps stay in bounds.
WalkState spread_state(int T) {
    WalkState s(T);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n;
    for (int x = -T / 2; x <= T / 2; ++x) {
        s.set_amplitude(Coin::up, x, {n(rng), n(rng)});
        s.set_amplitude(Coin::down, x, {n(rng), n(rng)});
    }
    const double norm = std::sqrt(s.norm_squared());
    for (auto& a : s.amplitudes()) a /= norm;
    return s;
}

CoinField field_for(int T, bool spatial) {
    Rng rng(9);
    return sample_coin_field({spatial ? DisorderKind::spatial : DisorderKind::temporal, 1.0}, T, rng);
}

constexpr int kSteps = 16;

void BM_ReferenceStep(benchmark::State& st) {
    const int T = static_cast<int>(st.range(0));
    const CoinField field = field_for(T, st.range(1) != 0);
    const WalkState base = spread_state(T);
    for (auto _ : st) {
        WalkState s = base;
        for (int t = 0; t < kSteps; ++t) s = reference::step(s, field, t);
        benchmark::DoNotOptimize(s.amplitudes().data());
    }
    st.SetItemsProcessed(st.iterations() * kSteps * base.lattice_size());
}

void BM_ParallelStep(benchmark::State& st) {
    const int T = static_cast<int>(st.range(0));
    const CoinField field = field_for(T, st.range(1) != 0);
    const WalkState base = spread_state(T);
    WalkState scratch(T);
    for (auto _ : st) {
        WalkState s = base;
        for (int t = 0; t < kSteps; ++t) step_into(s, scratch, field, t);
        benchmark::DoNotOptimize(s.amplitudes().data());
    }
    st.SetItemsProcessed(st.iterations() * kSteps * base.lattice_size());
    st.counters["threads"] = omp_get_max_threads();
}

void step_args(benchmark::internal::Benchmark* b) {
    for (int T : {200, 2000, 20000, 200000}) {
        for (int spatial : {0, 1}) b->Args({T, spatial});
    }
}

BENCHMARK(BM_ReferenceStep)->Apply(step_args);
BENCHMARK(BM_ParallelStep)->Apply(step_args);

void BM_Ensemble(benchmark::State& st) {
    ExperimentConfig cfg;
    cfg.disorder = {DisorderKind::spatial, 1.0};
    cfg.steps = 100;
    cfg.realizations = 64;
    const int workers = static_cast<int>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(run_ensemble(cfg, workers));
    st.SetItemsProcessed(st.iterations() * cfg.realizations);
}

BENCHMARK(BM_Ensemble)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
