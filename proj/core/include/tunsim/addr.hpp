#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace tunsim {

// IPv4 address held in host byte order; rendered as dotted quad.
struct V4Addr {
    uint32_t value = 0;

    static constexpr V4Addr from_octets(uint8_t a, uint8_t b, uint8_t c, uint8_t d) {
        return V4Addr{(uint32_t(a) << 24) | (uint32_t(b) << 16) | (uint32_t(c) << 8) | uint32_t(d)};
    }
    constexpr uint8_t octet(int i) const { return uint8_t(value >> (24 - 8 * i)); }

    auto operator<=>(const V4Addr&) const = default;
};

std::string to_string(V4Addr a);
std::optional<V4Addr> parse_v4(std::string_view text);

// IPv6 address as 16 big-endian bytes; rendered lower-case with the
// longest zero run compressed (RFC 5952 style).
struct V6Addr {
    std::array<uint8_t, 16> bytes{};

    static V6Addr from_groups(const std::array<uint16_t, 8>& groups);
    uint16_t group(int i) const {
        return uint16_t((uint16_t(bytes[2 * i]) << 8) | bytes[2 * i + 1]);
    }
    void set_group(int i, uint16_t v) {
        bytes[2 * i] = uint8_t(v >> 8);
        bytes[2 * i + 1] = uint8_t(v & 0xff);
    }
    bool is_zero() const;

    // True when the first `bits` bits equal those of `prefix`.
    bool has_prefix(const V6Addr& prefix, int bits) const;

    auto operator<=>(const V6Addr&) const = default;
};

std::string to_string(const V6Addr& a);
std::optional<V6Addr> parse_v6(std::string_view text);

// Replaces the low 64 bits with a small host interface identifier.
V6Addr with_interface_id(V6Addr addr, uint64_t iface_id);

}  // namespace tunsim
