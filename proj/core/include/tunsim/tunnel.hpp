#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>

#include "tunsim/addressing.hpp"
#include "tunsim/packet.hpp"
#include "tunsim/rng.hpp"

namespace tunsim {

enum class TunnelProtocol : uint8_t { p6to4, teredo, isatap };

const char* to_string(TunnelProtocol p);

// UDP service port used by Teredo encapsulation and its control traffic.
inline constexpr uint16_t kTeredoPort = 3544;
// UDP port for prefix-assignment handshakes and keepalives of the
// proto-41 tunnels.
inline constexpr uint16_t kTunnelControlPort = 5071;

// Byte cost of one encapsulation step.
inline constexpr std::size_t kProto41Overhead = kIpv4HeaderBytes;                    // 20
inline constexpr std::size_t kTeredoOverhead = kIpv4HeaderBytes + kUdpHeaderBytes;   // 28

struct TunnelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Keepalive cadence in data packets. The 6to4 interval is redrawn from
// {18,19} each cycle; the other two are fixed.
struct RefreshPolicy {
    TunnelProtocol protocol;
    int interval_min = 0;
    int interval_max = 0;

    static RefreshPolicy for_protocol(TunnelProtocol p);
    int next_interval(Rng& rng) const;
};

enum class TunnelPhase : uint8_t { idle, setup_pending, established };

// Per-client tunnel state machine. Data packets may only be encapsulated in
// the established phase; the refresh counter stalls the k-th data packet
// until the keepalive round trip completes.
struct TunnelState {
    TunnelProtocol protocol;
    TunnelPhase phase = TunnelPhase::idle;
    V6Addr assigned_prefix;   // full client address for Teredo
    uint32_t server_node = 0;
    int data_packets_since_refresh = 0;
    int current_interval = 0;
    RefreshPolicy policy;

    explicit TunnelState(TunnelProtocol p)
        : protocol(p), policy(RefreshPolicy::for_protocol(p)) {}

    void begin_setup() { phase = TunnelPhase::setup_pending; }
    void establish(const V6Addr& prefix, Rng& rng) {
        phase = TunnelPhase::established;
        assigned_prefix = prefix;
        data_packets_since_refresh = 0;
        current_interval = policy.next_interval(rng);
    }

    // Counts one data send. Returns true when this packet completes a
    // refresh cycle: the caller must emit a keepalive and hold the packet
    // until the reply returns. Throws if called outside established phase.
    bool on_data_sent(Rng& rng);
};

// Wraps an IPv6 packet for transport over IPv4 toward endpoint_v4.
// 6to4/ISATAP add a proto-41 header (+20 bytes); Teredo adds IPv4+UDP
// (+28 bytes) with src/dst port 3544. The inner packet is not modified.
Packet encap(const Packet& inner, const TunnelState& state, V4Addr self_v4, V4Addr endpoint_v4);

// Strips the outer layers added by encap; the result is byte-identical to
// the pre-encapsulation packet. Throws TunnelError on a layering mismatch
// (for example a proto-41 packet handed to a Teredo relay).
Packet decap(const Packet& outer, TunnelProtocol protocol);

}  // namespace tunsim
