#include "tunsim/trace.hpp"

#include <cstdio>

namespace tunsim {

const char* to_string(TraceEvent e) {
    switch (e) {
        case TraceEvent::sent: return "sent";
        case TraceEvent::received: return "received";
        case TraceEvent::encap: return "encap";
        case TraceEvent::decap: return "decap";
        case TraceEvent::drop: return "drop";
        case TraceEvent::refresh: return "refresh";
        case TraceEvent::setup_msg: return "setup_msg";
        case TraceEvent::dns_query: return "dns_query";
        case TraceEvent::dns_reply: return "dns_reply";
    }
    return "?";
}

const char* to_string(DropReason r) {
    switch (r) {
        case DropReason::none: return "";
        case DropReason::nat_proto41: return "nat_proto41";
        case DropReason::no_binding: return "no_binding";
        case DropReason::layering_mismatch: return "layering_mismatch";
        case DropReason::no_route: return "no_route";
        case DropReason::ttl_expired: return "ttl_expired";
        case DropReason::mtu_exceeded: return "mtu_exceeded";
        case DropReason::unknown_dest: return "unknown_dest";
    }
    return "?";
}

std::string trace_to_csv(const Trace& trace, const std::vector<std::string>& node_names) {
    std::string out = "time_ms,node,packet_id,flow_id,event,reason,bytes\n";
    char buf[192];
    for (const TraceRecord& r : trace) {
        const char* name = r.node < node_names.size() ? node_names[r.node].c_str() : "?";
        std::snprintf(buf, sizeof buf, "%.9f,%s,%llu,%u,%s,%s,%u\n", r.time_ms, name,
                      static_cast<unsigned long long>(r.packet_id), r.flow_id,
                      to_string(r.event), to_string(r.reason), r.bytes);
        out += buf;
    }
    return out;
}

}  // namespace tunsim
