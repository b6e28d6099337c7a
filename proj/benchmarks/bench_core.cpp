#include <benchmark/benchmark.h>

#include "mcm/diagnostics.hpp"
#include "mcm/gmm.hpp"
#include "mcm/memory.hpp"
#include "mcm/rng.hpp"

namespace {

using namespace mcm;

MemorySample sample_at(Rng& rng, std::int64_t id, double cx, double cy) {
    MemorySample s;
    s.id = id;
    s.descriptor.kind = DescriptorKind::ChannelStats;
    s.descriptor.values = {cx + 0.02 * rng.normal(), cy + 0.02 * rng.normal(), 0.5, 0.05,
                           0.5,  0.05};
    s.uncertainty = rng.unit() * std::log(100.0);
    return s;
}

MemoryParams default_params() {
    MemoryParams p;
    return p;
}

void fill_memory(MultiClusterMemory& mem, Rng& rng, int per_cluster) {
    const double centres[5][2] = {{0.1, 0.01}, {0.3, 0.07}, {0.5, 0.2}, {0.7, 0.07}, {0.9, 0.01}};
    std::int64_t id = 0;
    for (int rep = 0; rep < per_cluster; ++rep)
        for (const auto& c : centres) mem.insert(sample_at(rng, id++, c[0], c[1]), rep);
}

void BM_Insert(benchmark::State& state) {
    Rng rng(7);
    MultiClusterMemory mem(default_params());
    fill_memory(mem, rng, 64);
    std::int64_t id = 1 << 20;
    for (auto _ : state) {
        const std::int64_t next = id++;
        const auto out = mem.insert(sample_at(rng, next, 0.5, 0.2), next);
        benchmark::DoNotOptimize(out.cluster_index);
    }
}
BENCHMARK(BM_Insert);

void BM_Consolidate(benchmark::State& state) {
    const MergeStrategy strategy =
        state.range(0) == 0 ? MergeStrategy::Acc : MergeStrategy::Gcc;
    for (auto _ : state) {
        state.PauseTiming();
        Rng rng(11);
        MultiClusterMemory mem(default_params());
        fill_memory(mem, rng, 32);
        state.ResumeTiming();
        const auto rec = mem.consolidate(strategy);
        benchmark::DoNotOptimize(rec.comparisons);
    }
}
BENCHMARK(BM_Consolidate)->Arg(0)->Arg(1);

void BM_Retrieve(benchmark::State& state) {
    Rng rng(13);
    MultiClusterMemory mem(default_params());
    fill_memory(mem, rng, 64);
    std::int64_t step = 0;
    for (auto _ : state) {
        const auto picks = mem.retrieve(64, rng, step++);
        benchmark::DoNotOptimize(picks.size());
    }
}
BENCHMARK(BM_Retrieve);

void BM_FitEm(benchmark::State& state) {
    Rng rng(17);
    Matrix data;
    for (int i = 0; i < 640; ++i) {
        const int mode = i % 4;
        data.push_back({0.2 * mode + 0.03 * rng.normal(), 0.05 * mode + 0.01 * rng.normal()});
    }
    FitConfig cfg;
    cfg.restarts = 1;
    for (auto _ : state) {
        const GmmModel m = fit_em(data, 4, cfg);
        benchmark::DoNotOptimize(m.log_likelihood);
    }
}
BENCHMARK(BM_FitEm);

void BM_EnergyDistance(benchmark::State& state) {
    Rng rng(19);
    Matrix x, y;
    for (int i = 0; i < 320; ++i) {
        x.push_back({rng.unit(), rng.unit(), rng.unit(), rng.unit(), rng.unit(), rng.unit()});
        y.push_back({rng.unit(), rng.unit(), rng.unit(), rng.unit(), rng.unit(), rng.unit()});
    }
    for (auto _ : state) {
        const double d = energy_distance(x, y);
        benchmark::DoNotOptimize(d);
    }
}
BENCHMARK(BM_EnergyDistance);

}  // namespace

BENCHMARK_MAIN();
