#include "tunsim/traffic.hpp"

#include <algorithm>
#include <cstring>
#include <map>

namespace tunsim {

std::size_t FlowLog::received() const {
    std::size_t n = 0;
    for (const auto& s : samples)
        if (s.tr_ms) ++n;
    return n;
}

namespace {

// seq, flow id and the send timestamp ride in the first payload bytes, the
// way a measurement stream would carry them.
std::vector<uint8_t> stream_payload(uint32_t seq, uint32_t flow_id, double ts_ms, std::size_t size) {
    std::vector<uint8_t> pl(size, 0);
    for (int i = 0; i < 4 && std::size_t(i) < size; ++i) pl[i] = uint8_t(seq >> (24 - 8 * i));
    for (int i = 0; i < 4 && std::size_t(4 + i) < size; ++i) pl[4 + i] = uint8_t(flow_id >> (24 - 8 * i));
    if (size >= 16) {
        uint64_t bits;
        static_assert(sizeof bits == sizeof ts_ms);
        std::memcpy(&bits, &ts_ms, sizeof bits);
        for (int i = 0; i < 8; ++i) pl[8 + i] = uint8_t(bits >> (56 - 8 * i));
    }
    return pl;
}

V6Addr flow_src_addr(const Network& net, NodeId src) {
    const Node& n = net.node(src);
    if (n.tunnel) return n.tunnel->self_addr;
    if (!n.v6_addrs.empty()) return n.v6_addrs.front();
    return {};
}

}  // namespace

void generate(Network& net, const FlowPlan& plan) {
    const Node& src = net.node(plan.src);
    const Node& dst = net.node(plan.dst);
    if (dst.stacks == StackMode::v4_only)
        throw TrafficError("flow destination has no IPv6 stack");
    if (src.stacks == StackMode::v4_only)
        throw TrafficError("flow source has no IPv6 stack");
    if (!src.tunnel && src.v6_routes.empty())
        throw TrafficError("incompatible stacks: source has no IPv6 path and no tunnel configured");
    if (plan.kind == FlowKind::udp_stream && (plan.rate_pps <= 0.0 || plan.duration_s <= 0.0))
        throw TrafficError("stream flow needs positive rate and duration");

    const uint64_t n = plan.packet_count();
    const double gap_ms = plan.kind == FlowKind::ping ? plan.interval_ms : 1000.0 / plan.rate_pps;

    for (uint64_t i = 0; i < n; ++i) {
        const double at = plan.start_ms + double(i) * gap_ms;
        const FlowPlan p = plan;
        Network* netp = &net;
        net.sim().at(at, [netp, p, i]() {
            Network& nw = *netp;
            V6Addr src6 = flow_src_addr(nw, p.src);
            V6Addr dst6 = nw.node(p.dst).v6_addrs.front();
            Packet pkt;
            if (p.kind == FlowKind::ping) {
                EchoHeader e;
                e.type = EchoHeader::kRequest;
                e.ident = uint16_t(p.flow_id);
                e.seq = uint16_t(i);
                pkt = make_ipv6_packet(src6, dst6, proto::echo,
                                       encode_echo_payload(e, EchoHeader::kBytes + p.payload_bytes));
                pkt.meta.kind = PacketKind::echo_request;
            } else {
                pkt = make_ipv6_packet(src6, dst6, proto::udp,
                                       stream_payload(uint32_t(i), p.flow_id, nw.now(),
                                                      p.payload_bytes));
                pkt.meta.kind = PacketKind::data;
            }
            pkt.meta.packet_id = nw.alloc_packet_id();
            pkt.meta.flow_id = p.flow_id;
            pkt.meta.created_at_ms = nw.now();
            nw.originate(p.src, std::move(pkt));
        });
    }
}

std::vector<FlowLog> collect(const Trace& trace, const std::vector<FlowPlan>& plans) {
    std::vector<FlowLog> logs;
    for (const FlowPlan& plan : plans) {
        FlowLog log;
        log.flow_id = plan.flow_id;
        log.kind = plan.kind;

        std::map<uint64_t, std::size_t> index;  // packet_id -> sample slot
        const NodeId receive_node = plan.kind == FlowKind::ping ? plan.src : plan.dst;

        for (const TraceRecord& r : trace) {
            if (r.flow_id != plan.flow_id) continue;
            if (r.event == TraceEvent::sent && r.node == plan.src) {
                if (index.find(r.packet_id) == index.end()) {
                    index.emplace(r.packet_id, log.samples.size());
                    log.samples.push_back({r.packet_id, uint32_t(log.samples.size()), r.time_ms,
                                           std::nullopt});
                }
            } else if (r.event == TraceEvent::received && r.node == receive_node) {
                auto it = index.find(r.packet_id);
                if (it == index.end()) continue;  // reply seen before send: impossible
                auto& sample = log.samples[it->second];
                if (plan.kind == FlowKind::udp_stream && sample.tr_ms)
                    throw TrafficError("duplicate delivery of packet " + std::to_string(r.packet_id));
                // Ping replies may log twice at the source (tunnel arrival,
                // then post-decapsulation delivery); the delivery time wins.
                if (!sample.tr_ms || r.time_ms > *sample.tr_ms) sample.tr_ms = r.time_ms;
            }
        }
        logs.push_back(std::move(log));
    }
    return logs;
}

}  // namespace tunsim
