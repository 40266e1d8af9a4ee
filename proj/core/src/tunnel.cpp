#include "tunsim/tunnel.hpp"

#include "tunsim/codec.hpp"

namespace tunsim {

const char* to_string(TunnelProtocol p) {
    switch (p) {
        case TunnelProtocol::p6to4: return "6to4";
        case TunnelProtocol::teredo: return "teredo";
        case TunnelProtocol::isatap: return "isatap";
    }
    return "?";
}

RefreshPolicy RefreshPolicy::for_protocol(TunnelProtocol p) {
    switch (p) {
        case TunnelProtocol::isatap: return {p, 13, 13};
        case TunnelProtocol::p6to4: return {p, 18, 19};
        case TunnelProtocol::teredo: return {p, 21, 21};
    }
    return {p, 0, 0};
}

int RefreshPolicy::next_interval(Rng& rng) const {
    if (interval_min == interval_max) return interval_min;
    return rng.uniform_int(interval_min, interval_max);
}

bool TunnelState::on_data_sent(Rng& rng) {
    if (phase != TunnelPhase::established)
        throw TunnelError("data send attempted outside established phase");
    ++data_packets_since_refresh;
    if (data_packets_since_refresh < current_interval) return false;
    data_packets_since_refresh = 0;
    current_interval = policy.next_interval(rng);
    return true;
}

Packet encap(const Packet& inner, const TunnelState& state, V4Addr self_v4, V4Addr endpoint_v4) {
    if (inner.layers.size() != 1 || !inner.outer_is_v6())
        throw TunnelError("encap requires a bare IPv6 packet");
    if (state.phase != TunnelPhase::established)
        throw TunnelError("encap outside established phase");

    Packet out = inner;
    std::size_t inner_bytes = encoded_size(inner);

    if (state.protocol == TunnelProtocol::teredo) {
        UdpHeader udp;
        udp.src_port = kTeredoPort;
        udp.dst_port = kTeredoPort;
        udp.length = uint16_t(kUdpHeaderBytes + inner_bytes);
        Ipv4Header ip;
        ip.src = self_v4;
        ip.dst = endpoint_v4;
        ip.protocol = proto::udp;
        ip.total_len = uint16_t(kIpv4HeaderBytes + kUdpHeaderBytes + inner_bytes);
        out.layers.insert(out.layers.begin(), udp);
        out.layers.insert(out.layers.begin(), ip);
    } else {
        Ipv4Header ip;
        ip.src = self_v4;
        ip.dst = endpoint_v4;
        ip.protocol = proto::ipv6_in_ipv4;
        ip.total_len = uint16_t(kIpv4HeaderBytes + inner_bytes);
        out.layers.insert(out.layers.begin(), ip);
    }
    refresh_checksums(out);
    return out;
}

Packet decap(const Packet& outer, TunnelProtocol protocol) {
    const bool teredo = protocol == TunnelProtocol::teredo;
    if (!outer.outer_is_v4())
        throw TunnelError("decap expects an IPv4 outer layer");
    const Ipv4Header& ip = outer.outer_v4();

    if (teredo) {
        if (ip.protocol != proto::udp || outer.layers.size() != 3 ||
            !std::holds_alternative<UdpHeader>(outer.layers[1]) ||
            !std::holds_alternative<Ipv6Header>(outer.layers[2]))
            throw TunnelError("layering mismatch: expected IPv6-in-UDP-in-IPv4");
    } else {
        if (ip.protocol != proto::ipv6_in_ipv4 || outer.layers.size() != 2 ||
            !std::holds_alternative<Ipv6Header>(outer.layers[1]))
            throw TunnelError("layering mismatch: expected IPv6-in-IPv4");
    }

    Packet inner;
    inner.layers.emplace_back(std::get<Ipv6Header>(outer.layers.back()));
    inner.payload = outer.payload;
    inner.meta = outer.meta;
    return inner;
}

}  // namespace tunsim
