#include "tunsim/packet.hpp"

#include "tunsim/checksum.hpp"
#include "tunsim/codec.hpp"

namespace tunsim {

const char* to_string(PacketKind k) {
    switch (k) {
        case PacketKind::data: return "data";
        case PacketKind::refresh: return "refresh";
        case PacketKind::setup: return "setup";
        case PacketKind::dns_query: return "dns_query";
        case PacketKind::dns_reply: return "dns_reply";
        case PacketKind::echo_request: return "echo_request";
        case PacketKind::echo_reply: return "echo_reply";
    }
    return "?";
}

const Ipv6Header* Packet::inner_v6() const {
    for (auto it = layers.rbegin(); it != layers.rend(); ++it)
        if (auto* h = std::get_if<Ipv6Header>(&*it)) return h;
    return nullptr;
}

Ipv6Header* Packet::inner_v6() {
    for (auto it = layers.rbegin(); it != layers.rend(); ++it)
        if (auto* h = std::get_if<Ipv6Header>(&*it)) return h;
    return nullptr;
}

const UdpHeader* Packet::udp() const {
    for (const auto& l : layers)
        if (auto* h = std::get_if<UdpHeader>(&l)) return h;
    return nullptr;
}

UdpHeader* Packet::udp() {
    for (auto& l : layers)
        if (auto* h = std::get_if<UdpHeader>(&l)) return h;
    return nullptr;
}

Packet make_ipv6_packet(const V6Addr& src, const V6Addr& dst, uint8_t next_header,
                        std::vector<uint8_t> payload, uint32_t flow_label) {
    Packet p;
    Ipv6Header h;
    h.src = src;
    h.dst = dst;
    h.next_header = next_header;
    h.flow_label = flow_label & 0xfffff;
    h.payload_len = uint16_t(payload.size());
    p.layers.emplace_back(h);
    p.payload = std::move(payload);
    return p;
}

Packet make_ipv4_packet(V4Addr src, V4Addr dst, uint8_t protocol,
                        std::vector<uint8_t> payload, uint16_t identification) {
    Packet p;
    Ipv4Header h;
    h.src = src;
    h.dst = dst;
    h.protocol = protocol;
    h.identification = identification;
    h.total_len = uint16_t(kIpv4HeaderBytes + payload.size());
    p.layers.emplace_back(h);
    p.payload = std::move(payload);
    refresh_checksums(p);
    return p;
}

Packet make_udp_packet(V4Addr src, V4Addr dst, uint16_t src_port, uint16_t dst_port,
                       std::vector<uint8_t> payload, uint16_t identification) {
    Packet p;
    Ipv4Header ip;
    ip.src = src;
    ip.dst = dst;
    ip.protocol = proto::udp;
    ip.identification = identification;
    ip.total_len = uint16_t(kIpv4HeaderBytes + kUdpHeaderBytes + payload.size());
    UdpHeader udp;
    udp.src_port = src_port;
    udp.dst_port = dst_port;
    udp.length = uint16_t(kUdpHeaderBytes + payload.size());
    p.layers.emplace_back(ip);
    p.layers.emplace_back(udp);
    p.payload = std::move(payload);
    refresh_checksums(p);
    return p;
}

std::vector<uint8_t> encode_echo_payload(const EchoHeader& echo, std::size_t pad_to) {
    std::size_t n = pad_to < EchoHeader::kBytes ? EchoHeader::kBytes : pad_to;
    std::vector<uint8_t> out(n, 0);
    out[0] = echo.type;
    out[2] = uint8_t(echo.ident >> 8);
    out[3] = uint8_t(echo.ident);
    out[4] = uint8_t(echo.seq >> 8);
    out[5] = uint8_t(echo.seq);
    return out;
}

EchoHeader decode_echo_payload(const std::vector<uint8_t>& payload) {
    EchoHeader e;
    if (payload.size() < EchoHeader::kBytes) return e;
    e.type = payload[0];
    e.ident = uint16_t((uint16_t(payload[2]) << 8) | payload[3]);
    e.seq = uint16_t((uint16_t(payload[4]) << 8) | payload[5]);
    return e;
}

void refresh_checksums(Packet& p) {
    // IPv4 header checksum over a scratch serialization; UDP checksum over
    // the pseudo-header plus the re-encoded tail when a UDP layer exists.
    for (auto& layer : p.layers) {
        if (auto* ip = std::get_if<Ipv4Header>(&layer)) {
            uint8_t raw[kIpv4HeaderBytes];
            raw[0] = 0x45;
            raw[1] = 0x00;
            raw[2] = uint8_t(ip->total_len >> 8);
            raw[3] = uint8_t(ip->total_len);
            raw[4] = uint8_t(ip->identification >> 8);
            raw[5] = uint8_t(ip->identification);
            raw[6] = 0;
            raw[7] = 0;
            raw[8] = ip->ttl;
            raw[9] = ip->protocol;
            raw[10] = 0;
            raw[11] = 0;
            for (int i = 0; i < 4; ++i) {
                raw[12 + i] = ip->src.octet(i);
                raw[16 + i] = ip->dst.octet(i);
            }
            ip->header_checksum = internet_checksum(std::span<const uint8_t>(raw, kIpv4HeaderBytes));
        }
    }
    // UDP checksum over pseudo-header + UDP header + everything after it.
    if (UdpHeader* udp = p.udp()) {
        udp->checksum = 0;
        auto bytes = encode(p);
        // locate the UDP header: directly after the outer IPv4 header
        std::size_t off = kIpv4HeaderBytes;
        const Ipv4Header& ip = p.outer_v4();
        uint8_t pseudo[12];
        for (int i = 0; i < 4; ++i) {
            pseudo[i] = ip.src.octet(i);
            pseudo[4 + i] = ip.dst.octet(i);
        }
        pseudo[8] = 0;
        pseudo[9] = proto::udp;
        pseudo[10] = uint8_t(udp->length >> 8);
        pseudo[11] = uint8_t(udp->length);
        uint32_t acc = checksum_accumulate(0, std::span<const uint8_t>(pseudo, 12));
        acc = checksum_accumulate(acc, std::span<const uint8_t>(bytes.data() + off, bytes.size() - off));
        uint16_t sum = checksum_finish(acc);
        if (sum == 0) sum = 0xffff;  // zero is reserved for "no checksum"
        udp->checksum = sum;
    }
}

}  // namespace tunsim
