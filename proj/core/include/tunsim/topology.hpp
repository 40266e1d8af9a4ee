#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tunsim/nat.hpp"
#include "tunsim/packet.hpp"
#include "tunsim/rng.hpp"
#include "tunsim/sim.hpp"
#include "tunsim/trace.hpp"
#include "tunsim/tunnel.hpp"

namespace tunsim {

using NodeId = uint32_t;
using LinkId = uint32_t;
inline constexpr LinkId kNoLink = 0xffffffff;

enum class NodeRole : uint8_t { host, router, nat, dns, relay, server };
enum class StackMode : uint8_t { v4_only, v6_only, dual };

struct TopologyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Per-operation processing costs in milliseconds. Encap/decap carry a
// per-byte component on top of the fixed cost; everything else is flat.
struct OpCosts {
    double forward_ms = 0.0;
    double encap_fixed_ms = 0.0;
    double encap_per_byte_ms = 0.0;
    double decap_fixed_ms = 0.0;
    double decap_per_byte_ms = 0.0;
    double dns_lookup_ms = 0.0;
    double setup_processing_ms = 0.0;
    double refresh_processing_ms = 0.0;
    double nat_translate_ms = 0.0;
    double echo_reply_ms = 0.0;

    double encap_cost(std::size_t outer_bytes) const {
        return encap_fixed_ms + encap_per_byte_ms * double(outer_bytes);
    }
    double decap_cost(std::size_t outer_bytes) const {
        return decap_fixed_ms + decap_per_byte_ms * double(outer_bytes);
    }
};

struct LinkSpec {
    double delay_ms = 0.0;
    double rate_bits_per_ms = 0.0;  // 0 = infinite rate, no serialization
    uint32_t mtu_bytes = 2000;

    double serialization_ms(std::size_t bytes) const {
        if (rate_bits_per_ms <= 0.0) return 0.0;
        return double(bytes) * 8.0 / rate_bits_per_ms;
    }
};

// What a node does with an IPv6 packet matching a route.
enum class V6Action : uint8_t {
    forward,          // native forwarding out of `link`
    tunnel_to,        // encapsulate toward a fixed IPv4 endpoint
    extract_6to4,     // embedded IPv4 from the 2002:: destination
    extract_isatap,   // embedded IPv4 from the interface identifier
    extract_teredo,   // NAT mapping from the Teredo destination
};

struct V6Route {
    V6Addr prefix;
    int plen = 0;
    V6Action action = V6Action::forward;
    LinkId link = kNoLink;   // forward
    V4Addr via_v4;           // tunnel_to
    TunnelProtocol via_proto = TunnelProtocol::p6to4;  // encapsulation for tunnel_to
};

struct V4Route {
    V4Addr prefix;
    int plen = 0;
    LinkId link = kNoLink;
};

// Sender-side tunnel machinery: setup handshake progress, the keepalive
// hold queue, and the adopted address.
struct TunnelClient {
    TunnelState state;
    V4Addr server_v4;
    uint16_t server_port = kTunnelControlPort;
    V4Addr relay_v4;            // data endpoint for ISATAP/Teredo clients
    bool refresh_in_flight = false;
    std::vector<Packet> held;   // data stalled behind an in-flight refresh
    uint64_t iface_id = 1;
    V6Addr self_addr;

    explicit TunnelClient(TunnelProtocol p) : state(p) {}
};

struct Node {
    NodeId id = 0;
    std::string name;
    NodeRole role = NodeRole::host;
    StackMode stacks = StackMode::dual;
    OpCosts costs;
    V4Addr v4;
    std::vector<V6Addr> v6_addrs;
    std::vector<V4Route> v4_routes;
    std::vector<V6Route> v6_routes;

    bool decaps_proto41 = false;     // 6to4 router/relay, ISATAP router, ISATAP host
    bool teredo_endpoint = false;    // Teredo relay or client
    bool setup_server = false;       // answers prefix requests and keepalives
    TunnelProtocol served_protocol = TunnelProtocol::p6to4;
    V6Addr served_prefix;            // ISATAP /64 advertised by its router
    bool auxiliary = false;
    std::string aux_device_name;

    std::optional<TunnelClient> tunnel;
    std::optional<NatTable> nat;
    LinkId nat_internal_link = kNoLink;
    std::map<std::string, V6Addr> dns_zone;

    bool owns_v6(const V6Addr& a) const {
        for (const auto& x : v6_addrs)
            if (x == a) return true;
        return false;
    }
};

// The simulated network: nodes, links, event loop, and the trace that every
// metric is derived from. One instance per run; instances share nothing.
class Network {
public:
    explicit Network(uint64_t seed) : rng_(seed) {}

    NodeId add_node(std::string name, NodeRole role, StackMode stacks, OpCosts costs = {});
    LinkId add_link(NodeId a, NodeId b, LinkSpec spec);
    LinkId link_between(NodeId a, NodeId b) const;

    Node& node(NodeId id) { return nodes_[id]; }
    const Node& node(NodeId id) const { return nodes_[id]; }
    std::size_t node_count() const { return nodes_.size(); }
    std::vector<std::string> node_names() const;

    Simulator& sim() { return sim_; }
    Rng& rng() { return rng_; }
    const Trace& trace() const { return trace_; }
    SimTime now() const { return sim_.now(); }

    uint64_t alloc_packet_id() { return next_packet_id_++; }

    // Flow-origination entry point: records the flow-level `sent` row at the
    // current sim time, then runs the sender's tunnel pipeline (phase check,
    // keepalive cadence, encapsulation) before transmission.
    void originate(NodeId src, Packet p);

    // Control-plane origination (setup, DNS, keepalives): no tunnel pipeline.
    void originate_control(NodeId src, Packet p, TraceEvent milestone = TraceEvent::sent);

    void start_tunnel_setup(NodeId client);
    void send_dns_query(NodeId client, const std::string& name);

    void run(SimTime until = -1.0, uint64_t max_events = Simulator::kDefaultMaxEvents);

    // Resolved DNS answers observed by a node, in arrival order.
    const std::vector<V6Addr>& dns_answers(NodeId node) const;

private:
    struct LinkRuntime {
        NodeId a = 0, b = 0;
        LinkSpec spec;
        SimTime busy_until[2] = {0.0, 0.0};
    };

    void transmit(NodeId from, LinkId link, Packet p);
    void arrive(NodeId at, LinkId via, Packet p);
    void process_v4(NodeId at, LinkId via, Packet p);
    void process_v6(NodeId at, Packet p, bool charge_forward);
    void deliver_local_v6(NodeId at, Packet p);
    void forward_v4(NodeId at, Packet p, double extra_cost);
    void originate_v4(NodeId at, Packet p);
    void dispatch_udp_service(NodeId at, Packet p);
    void serve_setup(NodeId at, Packet p);
    void client_setup_msg(NodeId at, Packet p);
    void serve_refresh(NodeId at, Packet p);
    void client_refresh_ack(NodeId at, Packet p);
    void serve_dns(NodeId at, Packet p);
    void send_tunneled(NodeId src, Packet inner);
    void flush_held(NodeId src);
    void emit_refresh(NodeId src);
    void drop(NodeId at, const Packet& p, DropReason reason);
    void record(TraceEvent ev, NodeId node, const Packet& p, DropReason reason = DropReason::none);

    const V4Route* match_v4(const Node& n, V4Addr dst) const;
    const V6Route* match_v6(const Node& n, const V6Addr& dst) const;

    Simulator sim_;
    Rng rng_;
    Trace trace_;
    std::vector<Node> nodes_;
    std::vector<LinkRuntime> links_;
    std::map<NodeId, std::vector<V6Addr>> dns_answers_;
    uint64_t next_packet_id_ = 1;

public:
    // Teredo service prefix for this network (configurable per scenario).
    V6Addr teredo_prefix;
};

int v4_prefix_bits_match(V4Addr addr, V4Addr prefix, int plen);

}  // namespace tunsim
