#include <benchmark/benchmark.h>

#include <random>

#include "tunsim/metrics.hpp"

using namespace tunsim;

namespace {

std::vector<double> delays(std::size_t n) {
    std::mt19937_64 rng(9);
    std::vector<double> d(n);
    for (auto& x : d) x = 1.2 + double(rng() % 1000) / 10000.0;
    return d;
}

void BM_Jitter(benchmark::State& state) {
    auto d = delays(std::size_t(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(jitter(d));
}
BENCHMARK(BM_Jitter)->Arg(1000)->Arg(100000);

void BM_VarianceStddev(benchmark::State& state) {
    auto d = delays(std::size_t(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(variance(d));
        benchmark::DoNotOptimize(stddev(d));
    }
}
BENCHMARK(BM_VarianceStddev)->Arg(1000)->Arg(100000);

void BM_FlowMetrics(benchmark::State& state) {
    FlowLog log;
    log.flow_id = 1;
    std::size_t n = std::size_t(state.range(0));
    for (std::size_t i = 0; i < n; ++i) {
        FlowLog::Sample s;
        s.packet_id = i;
        s.seq = uint32_t(i);
        s.ts_ms = 25.0 * double(i);
        s.tr_ms = s.ts_ms + 1.25;
        log.samples.push_back(s);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(throughput_pps(log));
        E2edResult d = e2ed(log);
        benchmark::DoNotOptimize(jitter(d.delays_ms));
    }
}
BENCHMARK(BM_FlowMetrics)->Arg(12000);

}  // namespace
