#include "tunsim/nat.hpp"

namespace tunsim {

NatVerdict NatTable::apply_outbound(Packet& p, double now_ms) {
    if (!p.outer_is_v4()) return NatVerdict::drop_proto41;
    Ipv4Header& ip = p.outer_v4();
    if (ip.protocol == proto::ipv6_in_ipv4) return NatVerdict::drop_proto41;
    if (ip.protocol != proto::udp) return NatVerdict::drop_proto41;

    UdpHeader* udp = p.udp();
    Endpoint internal{ip.src, udp->src_port};
    auto it = by_internal_.find(internal);
    uint16_t ext_port;
    if (it == by_internal_.end()) {
        ext_port = next_port_++;
        by_internal_.emplace(internal, ext_port);
        by_external_port_.emplace(ext_port, Binding{internal, ext_port, now_ms});
    } else {
        ext_port = it->second;
        by_external_port_[ext_port].last_used_ms = now_ms;
    }
    ip.src = external_;
    udp->src_port = ext_port;
    refresh_checksums(p);
    return NatVerdict::forwarded;
}

NatVerdict NatTable::apply_inbound(Packet& p, double now_ms) {
    if (!p.outer_is_v4()) return NatVerdict::drop_no_binding;
    Ipv4Header& ip = p.outer_v4();
    if (ip.protocol == proto::ipv6_in_ipv4) return NatVerdict::drop_proto41;
    if (ip.protocol != proto::udp || ip.dst != external_) return NatVerdict::drop_no_binding;

    UdpHeader* udp = p.udp();
    auto it = by_external_port_.find(udp->dst_port);
    if (it == by_external_port_.end()) return NatVerdict::drop_no_binding;
    it->second.last_used_ms = now_ms;
    ip.dst = it->second.internal.addr;
    udp->dst_port = it->second.internal.port;
    refresh_checksums(p);
    return NatVerdict::forwarded;
}

std::optional<uint16_t> NatTable::external_port(V4Addr internal, uint16_t port) const {
    auto it = by_internal_.find(Endpoint{internal, port});
    if (it == by_internal_.end()) return std::nullopt;
    return it->second;
}

}  // namespace tunsim
