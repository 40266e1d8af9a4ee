#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tunsim/topology.hpp"
#include "tunsim/trace.hpp"

namespace tunsim {

enum class FlowKind : uint8_t { udp_stream, ping };

// Stream rate presets. "Audio" and "video" differ only in packet rate at a
// fixed 1500-byte payload.
inline constexpr double kAudioRatePps = 40.0;
inline constexpr double kVideoRatePps = 200.0;
inline constexpr uint32_t kDefaultPayloadBytes = 1500;

struct TrafficError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FlowPlan {
    FlowKind kind = FlowKind::udp_stream;
    uint32_t flow_id = 0;
    NodeId src = 0;
    NodeId dst = 0;
    uint32_t payload_bytes = kDefaultPayloadBytes;
    double start_ms = 0.0;
    // udp_stream
    double rate_pps = kAudioRatePps;
    double duration_s = 0.0;
    // ping
    uint32_t count = 0;
    double interval_ms = 1000.0;

    uint64_t packet_count() const {
        if (kind == FlowKind::ping) return count;
        return uint64_t(rate_pps * duration_s + 0.5);
    }
};

// Per-packet timestamps of one flow, joined from the trace.
struct FlowLog {
    struct Sample {
        uint64_t packet_id = 0;
        uint32_t seq = 0;
        double ts_ms = 0.0;                // send timestamp
        std::optional<double> tr_ms;       // receive timestamp, if delivered
    };

    uint32_t flow_id = 0;
    FlowKind kind = FlowKind::udp_stream;
    std::vector<Sample> samples;           // seq strictly increasing

    std::size_t sent() const { return samples.size(); }
    std::size_t received() const;
};

// Schedules the plan's packets into the network at fixed inter-departure
// times. Validates endpoint stack compatibility up front.
void generate(Network& net, const FlowPlan& plan);

// Joins sent/received trace rows per flow. Stream packets match at the
// destination; ping replies match back at the source. Duplicate deliveries
// violate the conservation invariant and throw.
std::vector<FlowLog> collect(const Trace& trace, const std::vector<FlowPlan>& plans);

}  // namespace tunsim
