#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "tunsim/headers.hpp"

namespace tunsim {

enum class PacketKind : uint8_t {
    data,
    refresh,
    setup,
    dns_query,
    dns_reply,
    echo_request,
    echo_reply,
};

const char* to_string(PacketKind k);

// Simulation-side annotations; never serialized to the wire.
struct PacketMeta {
    uint64_t packet_id = 0;
    uint32_t flow_id = 0;
    PacketKind kind = PacketKind::data;
    double created_at_ms = 0.0;
};

using Layer = std::variant<Ipv4Header, Ipv6Header, UdpHeader>;

// A packet is an ordered header stack (outermost first) plus payload bytes.
// Valid layerings:
//   [IPv6]  [IPv4(41),IPv6]  [IPv4(17),UDP,IPv6]  [IPv4(1)]  [IPv4(17),UDP]
struct Packet {
    std::vector<Layer> layers;
    std::vector<uint8_t> payload;
    PacketMeta meta;

    // Wire equality: headers and payload. Meta is sim bookkeeping.
    bool operator==(const Packet& o) const {
        return layers == o.layers && payload == o.payload;
    }

    bool outer_is_v4() const { return !layers.empty() && std::holds_alternative<Ipv4Header>(layers.front()); }
    bool outer_is_v6() const { return !layers.empty() && std::holds_alternative<Ipv6Header>(layers.front()); }
    const Ipv4Header& outer_v4() const { return std::get<Ipv4Header>(layers.front()); }
    Ipv4Header& outer_v4() { return std::get<Ipv4Header>(layers.front()); }
    const Ipv6Header& outer_v6() const { return std::get<Ipv6Header>(layers.front()); }
    Ipv6Header& outer_v6() { return std::get<Ipv6Header>(layers.front()); }

    // Innermost IPv6 header, if one is present anywhere in the stack.
    const Ipv6Header* inner_v6() const;
    Ipv6Header* inner_v6();
    const UdpHeader* udp() const;
    UdpHeader* udp();
};

// Builders compute all length fields; checksums are filled by the codec on
// encode and by these helpers so freshly built packets round-trip as-is.
Packet make_ipv6_packet(const V6Addr& src, const V6Addr& dst, uint8_t next_header,
                        std::vector<uint8_t> payload, uint32_t flow_label = 0);
Packet make_ipv4_packet(V4Addr src, V4Addr dst, uint8_t protocol,
                        std::vector<uint8_t> payload, uint16_t identification = 0);
Packet make_udp_packet(V4Addr src, V4Addr dst, uint16_t src_port, uint16_t dst_port,
                       std::vector<uint8_t> payload, uint16_t identification = 0);

std::vector<uint8_t> encode_echo_payload(const EchoHeader& echo, std::size_t pad_to);
EchoHeader decode_echo_payload(const std::vector<uint8_t>& payload);

// Refreshes IPv4 header checksum and UDP checksum after field rewrites.
void refresh_checksums(Packet& p);

}  // namespace tunsim
