#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tunsim/sim.hpp"

namespace tunsim {

enum class TraceEvent : uint8_t {
    sent,
    received,
    encap,
    decap,
    drop,
    refresh,
    setup_msg,
    dns_query,
    dns_reply,
};

enum class DropReason : uint8_t {
    none,
    nat_proto41,
    no_binding,
    layering_mismatch,
    no_route,
    ttl_expired,
    mtu_exceeded,
    unknown_dest,
};

const char* to_string(TraceEvent e);
const char* to_string(DropReason r);

// One timestamped per-node event; the raw material of every metric.
struct TraceRecord {
    SimTime time_ms = 0.0;
    uint32_t node = 0;
    uint64_t packet_id = 0;
    uint32_t flow_id = 0;
    TraceEvent event = TraceEvent::sent;
    DropReason reason = DropReason::none;
    uint32_t bytes = 0;
};

using Trace = std::vector<TraceRecord>;

// CSV export, one row per record:
//   time_ms,node,packet_id,flow_id,event,reason,bytes
// Node ids are rendered through `node_names`. Header row always present.
std::string trace_to_csv(const Trace& trace, const std::vector<std::string>& node_names);

}  // namespace tunsim
