#include <benchmark/benchmark.h>

#include "tunsim/config.hpp"
#include "tunsim/runner.hpp"
#include "tunsim/scenario.hpp"

using namespace tunsim;

namespace {

ScenarioConfig scenario(ScenarioProtocol p, double stream_s) {
    ScenarioConfig s;
    s.name = "bench";
    s.protocol = p;
    s.teredo_prefix = teredo_default_prefix();
    s.include_nat = p == ScenarioProtocol::teredo;
    s.setup_at_ms = 1000.0;
    s.dns_query_at_ms = 5000.0;
    FlowPlan stream;
    stream.kind = FlowKind::udp_stream;
    stream.rate_pps = kAudioRatePps;
    stream.duration_s = stream_s;
    stream.payload_bytes = 1500;
    stream.start_ms = 10000.0;
    s.flows.push_back(stream);
    return s;
}

CalibrationProfile calibration() {
    return CalibrationProfile::load(
        ConfigFile::parse_file(std::string(TUNSIM_CONFIG_DIR) + "/paper-default.cfg"));
}

void BM_ScenarioRun(benchmark::State& state) {
    ScenarioProtocol protos[] = {ScenarioProtocol::p6to4, ScenarioProtocol::teredo,
                                 ScenarioProtocol::isatap, ScenarioProtocol::baseline};
    ScenarioConfig sc = scenario(protos[state.range(0)], double(state.range(1)));
    CalibrationProfile calib = calibration();
    uint64_t seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_single(sc, calib, seed++));
    }
    state.SetItemsProcessed(int64_t(state.iterations()) * state.range(1) * 40);
}
BENCHMARK(BM_ScenarioRun)
    ->ArgsProduct({{0, 1, 2, 3}, {10}})
    ->Unit(benchmark::kMillisecond);

}  // namespace
