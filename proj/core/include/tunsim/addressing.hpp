#pragma once

#include <cstdint>
#include <optional>

#include "tunsim/addr.hpp"

namespace tunsim {

// Leading bits consumed by each tunnel's communication identifier: 6to4
// spends 16 prefix bits plus the 32 embedded IPv4 bits; ISATAP keeps the
// whole identifier inside a fixed 64-bit local prefix.
inline constexpr int k6to4SitePrefixBits = 16 + 32;
inline constexpr int kIsatapPrefixBits = 64;

// 2002::/16 network prefix.
inline constexpr uint16_t k6to4Prefix = 0x2002;

// Default Teredo service prefix, 2001:0000::/32. Configurable per scenario.
V6Addr teredo_default_prefix();

// 6to4: 2002:V4:: with zero subnet and interface bits.
V6Addr synth_6to4(V4Addr v4);
std::optional<V4Addr> parse_6to4(const V6Addr& a);

// ISATAP: copies the /64 prefix and sets the interface identifier to
// 0000:5efe followed by the embedded IPv4 address.
V6Addr synth_isatap(const V6Addr& prefix64, V4Addr v4);
std::optional<V4Addr> parse_isatap(const V6Addr& a);

struct TeredoFields {
    V4Addr server_v4;
    uint16_t flags = 0;        // 0x8000 = cone
    uint16_t mapped_port = 0;  // NAT external port, stored complemented
    V4Addr mapped_v4;          // NAT external address, stored complemented

    bool operator==(const TeredoFields&) const = default;
};

inline constexpr uint16_t kTeredoConeFlag = 0x8000;

// Layout: prefix(32) | server(32) | flags(16) | ~port(16) | ~client(32).
// Port and client address are stored bitwise-complemented on the wire.
V6Addr synth_teredo(const TeredoFields& f, const V6Addr& prefix32);
std::optional<TeredoFields> parse_teredo(const V6Addr& a, const V6Addr& prefix32);

}  // namespace tunsim
