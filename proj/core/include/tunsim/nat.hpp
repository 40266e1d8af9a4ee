#pragma once

#include <cstdint>
#include <map>
#include <optional>

#include "tunsim/packet.hpp"

namespace tunsim {

enum class NatVerdict : uint8_t { forwarded, drop_proto41, drop_no_binding };

// Full-cone NAT with endpoint-independent mappings. Bindings are stable for
// a flow's lifetime; ports are allocated sequentially so runs are
// reproducible.
class NatTable {
public:
    NatTable() = default;
    NatTable(V4Addr external, uint16_t first_port = 49152)
        : external_(external), next_port_(first_port) {}

    // Outbound: rewrites UDP src to (external, allocated port) and records
    // the binding. Bare proto-41 is dropped; NATs have no mapping for it,
    // which is what Teredo's UDP layer works around.
    NatVerdict apply_outbound(Packet& p, double now_ms);

    // Inbound: rewrites dst back to the internal endpoint of an existing
    // binding; drops otherwise.
    NatVerdict apply_inbound(Packet& p, double now_ms);

    V4Addr external() const { return external_; }
    std::size_t binding_count() const { return by_internal_.size(); }
    std::optional<uint16_t> external_port(V4Addr internal, uint16_t port) const;

private:
    struct Endpoint {
        V4Addr addr;
        uint16_t port = 0;
        auto operator<=>(const Endpoint&) const = default;
    };
    struct Binding {
        Endpoint internal;
        uint16_t external_port = 0;
        double last_used_ms = 0.0;
    };

    V4Addr external_;
    uint16_t next_port_ = 49152;
    std::map<Endpoint, uint16_t> by_internal_;
    std::map<uint16_t, Binding> by_external_port_;
};

}  // namespace tunsim
