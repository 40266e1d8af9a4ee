#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tunsim/traffic.hpp"

namespace tunsim {

struct MetricError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Throughput in packets per second: received count over the span from first
// send to last receive.
double throughput_pps(const FlowLog& log);

// pps * 1500 * 8 / 1000.
double throughput_kbps(double pps);

struct E2edResult {
    std::vector<double> delays_ms;  // per received packet, send order
    double mean_ms = 0.0;
};
E2edResult e2ed(const FlowLog& log);

// J_0 = 0 and J_i = |D_i - D_{i-1}|; the mean is over i >= 1. `telescoped`
// is the signed sum of consecutive differences, which collapses to
// D_n - D_0.
struct JitterResult {
    std::vector<double> series_ms;
    double mean_ms = 0.0;
    double telescoped_ms = 0.0;
};
JitterResult jitter(std::span<const double> delays_ms);

// Population variance (divide by N) and its square root.
double variance(std::span<const double> xs);
double stddev(std::span<const double> xs);

struct RttResult {
    double mean_ms = 0.0;
    std::size_t matched = 0;
    std::size_t unmatched = 0;
};
RttResult rtt(const FlowLog& ping_log);

// RTT_tunneled - RTT_untunneled. May be negative if the calibration is
// inconsistent; callers warn, the value is never clipped.
double tunneling_overhead(double rtt_tunneled_ms, double rtt_untunneled_ms);

struct AuxDevices {
    uint32_t count = 0;
    std::vector<std::string> names;
};

// One protocol's values for all eight parameters.
struct MetricsSummary {
    std::string protocol;
    double throughput_pps = 0.0;
    double throughput_kbps = 0.0;
    double e2ed_mean_ms = 0.0;
    double jitter_mean_ms = 0.0;
    double jitter_variance = 0.0;
    double jitter_stddev = 0.0;
    double rtt_mean_ms = 0.0;
    std::optional<double> tunneling_overhead_ms;  // needs the baseline run
    double tunnel_setup_delay_ms = 0.0;
    double query_delay_ms = 0.0;
    AuxDevices aux;
    // provenance, carried through every serialization
    uint64_t config_hash = 0;
    uint64_t base_seed = 0;
};

// Arithmetic mean of per-replication summaries.
MetricsSummary average_summaries(const std::vector<MetricsSummary>& runs);

}  // namespace tunsim
