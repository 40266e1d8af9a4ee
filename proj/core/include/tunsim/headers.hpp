#pragma once

#include <cstdint>

#include "tunsim/addr.hpp"

namespace tunsim {

// Protocol numbers carried in Ipv4Header::protocol / Ipv6Header::next_header.
namespace proto {
inline constexpr uint8_t echo = 1;          // minimal echo (ping) payload
inline constexpr uint8_t udp = 17;
inline constexpr uint8_t ipv6_in_ipv4 = 41; // 6to4 / ISATAP tunnels
}  // namespace proto

inline constexpr std::size_t kIpv4HeaderBytes = 20;  // no options
inline constexpr std::size_t kIpv6HeaderBytes = 40;  // no extension headers
inline constexpr std::size_t kUdpHeaderBytes = 8;

// Fixed 20-byte IPv4 header.
struct Ipv4Header {
    uint16_t total_len = 0;       // header + payload, bytes
    uint16_t identification = 0;
    uint8_t ttl = 64;
    uint8_t protocol = 0;
    uint16_t header_checksum = 0; // valid once encoded; see codec
    V4Addr src;
    V4Addr dst;

    bool operator==(const Ipv4Header&) const = default;
};

// Fixed 40-byte IPv6 header.
struct Ipv6Header {
    uint8_t traffic_class = 0;
    uint32_t flow_label = 0;      // 20 bits
    uint16_t payload_len = 0;     // everything after the fixed header
    uint8_t next_header = 0;
    uint8_t hop_limit = 64;
    V6Addr src;
    V6Addr dst;

    bool operator==(const Ipv6Header&) const = default;
};

struct UdpHeader {
    uint16_t src_port = 0;
    uint16_t dst_port = 0;
    uint16_t length = 0;          // header + payload, bytes
    uint16_t checksum = 0;

    bool operator==(const UdpHeader&) const = default;
};

// Minimal echo probe carried as the first bytes of a payload. Not a full
// ICMP implementation; just enough for request/reply RTT probes.
struct EchoHeader {
    static constexpr std::size_t kBytes = 8;
    static constexpr uint8_t kRequest = 1;
    static constexpr uint8_t kReply = 2;

    uint8_t type = kRequest;
    uint16_t ident = 0;
    uint16_t seq = 0;

    bool operator==(const EchoHeader&) const = default;
};

}  // namespace tunsim
