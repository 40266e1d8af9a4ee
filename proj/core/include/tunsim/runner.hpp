#pragma once

#include <string>
#include <vector>

#include "tunsim/metrics.hpp"
#include "tunsim/scenario.hpp"

namespace tunsim {

struct RunError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One replication: build, inject traffic, run to exhaustion, reduce the
// trace to a MetricsSummary. The trace is returned through `out_trace` when
// non-null (with node names for CSV export).
MetricsSummary run_single(const ScenarioConfig& scenario, const CalibrationProfile& calib,
                          uint64_t seed, Trace* out_trace = nullptr,
                          std::vector<std::string>* out_node_names = nullptr);

struct RunOptions {
    std::string out_dir;  // empty = no files written
};

struct RunArtifacts {
    MetricsSummary averaged;
    std::vector<MetricsSummary> per_rep;
    std::vector<std::string> files_written;
};

// Executes `replications` seeded runs (seed base+r), writes one trace CSV
// and one metrics CSV per replication plus the averaged summary CSV.
// Outputs are deterministic for a fixed config.
RunArtifacts cmd_run(const ScenarioConfig& scenario, const CalibrationProfile& calib,
                     const RunOptions& opts);

// Summary CSV serialization. ms columns use 4-decimal fixed notation;
// throughput keeps more digits (the span differences are small).
std::string summary_to_csv(const std::vector<MetricsSummary>& rows, uint64_t config_hash,
                           uint64_t base_seed);
std::vector<MetricsSummary> summaries_from_csv(const std::string& text);

}  // namespace tunsim
