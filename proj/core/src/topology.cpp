#include "tunsim/topology.hpp"

#include <algorithm>

#include "tunsim/codec.hpp"

namespace tunsim {

namespace {

// Control message payload layouts. Stage/type lives in byte 0; setup
// assignments carry the granted prefix in bytes 1..16.
constexpr uint8_t kSetupRequest = 1;
constexpr uint8_t kSetupAssign = 2;
constexpr uint8_t kSetupConfirm = 3;
constexpr uint8_t kRefreshKeepalive = 1;
constexpr uint8_t kRefreshAck = 2;
constexpr std::size_t kSetupPayloadBytes = 60;   // 88-byte message on the wire
constexpr std::size_t kRefreshPayloadBytes = 20; // 48-byte keepalive
constexpr std::size_t kDnsQueryPayloadBytes = 33;
constexpr std::size_t kDnsReplyPayloadBytes = 49;
constexpr uint16_t kDnsPort = 53;
constexpr uint16_t kDnsClientPort = 5353;
constexpr uint16_t kControlClientPort = 5072;

std::vector<uint8_t> setup_payload(uint8_t stage, const V6Addr& prefix = {}) {
    std::vector<uint8_t> pl(kSetupPayloadBytes, 0);
    pl[0] = stage;
    std::copy(prefix.bytes.begin(), prefix.bytes.end(), pl.begin() + 1);
    return pl;
}

std::vector<uint8_t> refresh_payload(uint8_t type) {
    std::vector<uint8_t> pl(kRefreshPayloadBytes, 0);
    pl[0] = type;
    return pl;
}

std::vector<uint8_t> dns_query_payload(const std::string& name) {
    std::vector<uint8_t> pl(kDnsQueryPayloadBytes, 0);
    pl[1] = uint8_t(name.size());
    for (std::size_t i = 0; i < name.size() && 2 + i < pl.size(); ++i)
        pl[2 + i] = uint8_t(name[i]);
    return pl;
}

std::vector<uint8_t> dns_reply_payload(const std::vector<uint8_t>& query, const V6Addr& addr) {
    std::vector<uint8_t> pl(kDnsReplyPayloadBytes, 0);
    std::copy(query.begin() + 1, query.begin() + long(kDnsQueryPayloadBytes), pl.begin() + 1);
    pl[0] = 2;
    std::copy(addr.bytes.begin(), addr.bytes.end(), pl.end() - 16);
    return pl;
}

std::string dns_query_name(const std::vector<uint8_t>& pl) {
    if (pl.size() < 2) return {};
    std::size_t n = pl[1];
    std::string name;
    for (std::size_t i = 0; i < n && 2 + i < pl.size(); ++i) name += char(pl[2 + i]);
    return name;
}

// Router-side encapsulation; no client state involved.
Packet encap_with(TunnelProtocol protocol, const Packet& inner, V4Addr self_v4, V4Addr endpoint_v4,
                  uint16_t dst_port = kTeredoPort, uint16_t src_port = kTeredoPort) {
    std::size_t inner_bytes = encoded_size(inner);
    Packet out = inner;
    if (protocol == TunnelProtocol::teredo) {
        UdpHeader udp;
        udp.src_port = src_port;
        udp.dst_port = dst_port;
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

}  // namespace

int v4_prefix_bits_match(V4Addr addr, V4Addr prefix, int plen) {
    if (plen == 0) return 0;
    uint32_t mask = plen >= 32 ? 0xffffffffu : ~((1u << (32 - plen)) - 1);
    return ((addr.value & mask) == (prefix.value & mask)) ? plen : -1;
}

NodeId Network::add_node(std::string name, NodeRole role, StackMode stacks, OpCosts costs) {
    Node n;
    n.id = NodeId(nodes_.size());
    n.name = std::move(name);
    n.role = role;
    n.stacks = stacks;
    n.costs = costs;
    nodes_.push_back(std::move(n));
    return nodes_.back().id;
}

LinkId Network::add_link(NodeId a, NodeId b, LinkSpec spec) {
    LinkRuntime l;
    l.a = a;
    l.b = b;
    l.spec = spec;
    links_.push_back(l);
    return LinkId(links_.size() - 1);
}

LinkId Network::link_between(NodeId a, NodeId b) const {
    for (std::size_t i = 0; i < links_.size(); ++i) {
        if ((links_[i].a == a && links_[i].b == b) || (links_[i].a == b && links_[i].b == a))
            return LinkId(i);
    }
    throw TopologyError("no link between nodes " + std::to_string(a) + " and " + std::to_string(b));
}

std::vector<std::string> Network::node_names() const {
    std::vector<std::string> names;
    names.reserve(nodes_.size());
    for (const auto& n : nodes_) names.push_back(n.name);
    return names;
}

void Network::record(TraceEvent ev, NodeId node, const Packet& p, DropReason reason) {
    trace_.push_back(TraceRecord{sim_.now(), node, p.meta.packet_id, p.meta.flow_id, ev, reason,
                                 uint32_t(encoded_size(p))});
}

void Network::drop(NodeId at, const Packet& p, DropReason reason) {
    record(TraceEvent::drop, at, p, reason);
}

const V4Route* Network::match_v4(const Node& n, V4Addr dst) const {
    const V4Route* best = nullptr;
    int best_len = -1;
    for (const auto& r : n.v4_routes) {
        int m = v4_prefix_bits_match(dst, r.prefix, r.plen);
        if (m >= 0 && m > best_len) {
            best = &r;
            best_len = m;
        }
    }
    return best;
}

const V6Route* Network::match_v6(const Node& n, const V6Addr& dst) const {
    const V6Route* best = nullptr;
    int best_len = -1;
    for (const auto& r : n.v6_routes) {
        if (dst.has_prefix(r.prefix, r.plen) && r.plen > best_len) {
            best = &r;
            best_len = r.plen;
        }
    }
    return best;
}

void Network::transmit(NodeId from, LinkId link, Packet p) {
    LinkRuntime& l = links_[link];
    std::size_t size = encoded_size(p);
    if (size > l.spec.mtu_bytes) {
        drop(from, p, DropReason::mtu_exceeded);
        return;
    }
    record(TraceEvent::sent, from, p);
    int dir = (from == l.a) ? 0 : 1;
    NodeId peer = (from == l.a) ? l.b : l.a;
    SimTime start = std::max(sim_.now(), l.busy_until[dir]);
    SimTime end = start + l.spec.serialization_ms(size);
    l.busy_until[dir] = end;
    SimTime arrival = end + l.spec.delay_ms;
    sim_.at(arrival, [this, peer, link, pkt = std::move(p)]() mutable {
        arrive(peer, link, std::move(pkt));
    });
}

void Network::arrive(NodeId at, LinkId via, Packet p) {
    record(TraceEvent::received, at, p);
    if (p.outer_is_v4()) {
        process_v4(at, via, std::move(p));
    } else if (p.outer_is_v6()) {
        process_v6(at, std::move(p), /*charge_forward=*/true);
    } else {
        drop(at, p, DropReason::layering_mismatch);
    }
}

void Network::forward_v4(NodeId at, Packet p, double extra_cost) {
    Node& n = nodes_[at];
    Ipv4Header& ip = p.outer_v4();
    if (ip.ttl <= 1) {
        drop(at, p, DropReason::ttl_expired);
        return;
    }
    ip.ttl--;
    refresh_checksums(p);
    const V4Route* r = match_v4(n, ip.dst);
    if (!r) {
        drop(at, p, DropReason::no_route);
        return;
    }
    double cost = n.costs.forward_ms + extra_cost;
    LinkId link = r->link;
    sim_.at(sim_.now() + cost, [this, at, link, pkt = std::move(p)]() mutable {
        transmit(at, link, std::move(pkt));
    });
}

// Locally generated IPv4 packet: routed without a forward cost or TTL spend.
void Network::originate_v4(NodeId at, Packet p) {
    const V4Route* r = match_v4(nodes_[at], p.outer_v4().dst);
    if (!r) {
        drop(at, p, DropReason::no_route);
        return;
    }
    transmit(at, r->link, std::move(p));
}

void Network::process_v4(NodeId at, LinkId via, Packet p) {
    Node& n = nodes_[at];

    if (n.nat) {
        bool outbound = (via == n.nat_internal_link);
        NatVerdict v = outbound ? n.nat->apply_outbound(p, sim_.now())
                                : n.nat->apply_inbound(p, sim_.now());
        if (v == NatVerdict::drop_proto41) {
            drop(at, p, DropReason::nat_proto41);
            return;
        }
        if (v == NatVerdict::drop_no_binding) {
            drop(at, p, DropReason::no_binding);
            return;
        }
        forward_v4(at, std::move(p), n.costs.nat_translate_ms);
        return;
    }

    if (n.stacks == StackMode::v6_only) {
        drop(at, p, DropReason::no_route);
        return;
    }

    const Ipv4Header ip = p.outer_v4();
    if (ip.dst != n.v4) {
        forward_v4(at, std::move(p), 0.0);
        return;
    }

    switch (ip.protocol) {
        case proto::ipv6_in_ipv4: {
            if (!n.decaps_proto41) {
                drop(at, p, DropReason::layering_mismatch);
                return;
            }
            double cost = n.costs.decap_cost(encoded_size(p));
            sim_.at(sim_.now() + cost, [this, at, pkt = std::move(p)]() {
                Packet inner;
                try {
                    inner = decap(pkt, TunnelProtocol::p6to4);
                } catch (const TunnelError&) {
                    drop(at, pkt, DropReason::layering_mismatch);
                    return;
                }
                record(TraceEvent::decap, at, inner);
                if (nodes_[at].owns_v6(inner.outer_v6().dst)) {
                    record(TraceEvent::received, at, inner);
                    deliver_local_v6(at, std::move(inner));
                } else {
                    process_v6(at, std::move(inner), /*charge_forward=*/true);
                }
            });
            return;
        }
        case proto::udp: {
            bool teredo_data = n.teredo_endpoint && p.layers.size() == 3;
            if (teredo_data) {
                double cost = n.costs.decap_cost(encoded_size(p));
                sim_.at(sim_.now() + cost, [this, at, pkt = std::move(p)]() {
                    Packet inner;
                    try {
                        inner = decap(pkt, TunnelProtocol::teredo);
                    } catch (const TunnelError&) {
                        drop(at, pkt, DropReason::layering_mismatch);
                        return;
                    }
                    record(TraceEvent::decap, at, inner);
                    if (nodes_[at].owns_v6(inner.outer_v6().dst)) {
                        record(TraceEvent::received, at, inner);
                        deliver_local_v6(at, std::move(inner));
                    } else {
                        process_v6(at, std::move(inner), /*charge_forward=*/true);
                    }
                });
                return;
            }
            dispatch_udp_service(at, std::move(p));
            return;
        }
        case proto::echo: {
            // Native IPv4 ping probe aimed at this node.
            EchoHeader echo = decode_echo_payload(p.payload);
            if (echo.type != EchoHeader::kRequest) return;  // reply consumed here
            double cost = n.costs.echo_reply_ms;
            sim_.at(sim_.now() + cost, [this, at, pkt = std::move(p)]() {
                EchoHeader reply = decode_echo_payload(pkt.payload);
                reply.type = EchoHeader::kReply;
                Packet out = make_ipv4_packet(pkt.outer_v4().dst, pkt.outer_v4().src, proto::echo,
                                              encode_echo_payload(reply, pkt.payload.size()));
                out.meta = pkt.meta;
                out.meta.kind = PacketKind::echo_reply;
                originate_v4(at, std::move(out));
            });
            return;
        }
        default:
            drop(at, p, DropReason::layering_mismatch);
            return;
    }
}

void Network::process_v6(NodeId at, Packet p, bool charge_forward) {
    Node& n = nodes_[at];
    if (n.stacks == StackMode::v4_only) {
        drop(at, p, DropReason::no_route);
        return;
    }

    Ipv6Header& ip6 = p.outer_v6();
    if (n.owns_v6(ip6.dst)) {
        deliver_local_v6(at, std::move(p));
        return;
    }

    const V6Route* r = match_v6(n, ip6.dst);
    if (!r) {
        drop(at, p, DropReason::no_route);
        return;
    }

    if (charge_forward) {
        if (ip6.hop_limit <= 1) {
            drop(at, p, DropReason::ttl_expired);
            return;
        }
        ip6.hop_limit--;
    }
    double cost = charge_forward ? n.costs.forward_ms : 0.0;

    switch (r->action) {
        case V6Action::forward: {
            LinkId link = r->link;
            sim_.at(sim_.now() + cost, [this, at, link, pkt = std::move(p)]() mutable {
                transmit(at, link, std::move(pkt));
            });
            return;
        }
        case V6Action::tunnel_to:
        case V6Action::extract_6to4:
        case V6Action::extract_isatap:
        case V6Action::extract_teredo: {
            V4Addr endpoint = r->via_v4;
            uint16_t dst_port = kTeredoPort;
            TunnelProtocol tp = r->via_proto;
            if (r->action == V6Action::extract_6to4) {
                auto v4 = parse_6to4(ip6.dst);
                if (!v4) {
                    drop(at, p, DropReason::unknown_dest);
                    return;
                }
                endpoint = *v4;
                tp = TunnelProtocol::p6to4;
            } else if (r->action == V6Action::extract_isatap) {
                auto v4 = parse_isatap(ip6.dst);
                if (!v4) {
                    drop(at, p, DropReason::unknown_dest);
                    return;
                }
                endpoint = *v4;
                tp = TunnelProtocol::isatap;
            } else if (r->action == V6Action::extract_teredo) {
                auto f = parse_teredo(ip6.dst, teredo_prefix);
                if (!f) {
                    drop(at, p, DropReason::unknown_dest);
                    return;
                }
                endpoint = f->mapped_v4;
                dst_port = f->mapped_port;
                tp = TunnelProtocol::teredo;
            }

            Packet outer = encap_with(tp, p, n.v4, endpoint, dst_port);
            cost += n.costs.encap_cost(encoded_size(outer));
            sim_.at(sim_.now() + cost, [this, at, pkt = std::move(outer)]() mutable {
                record(TraceEvent::encap, at, pkt);
                Node& node = nodes_[at];
                const V4Route* vr = match_v4(node, pkt.outer_v4().dst);
                if (!vr) {
                    drop(at, pkt, DropReason::no_route);
                    return;
                }
                transmit(at, vr->link, std::move(pkt));
            });
            return;
        }
    }
}

void Network::deliver_local_v6(NodeId at, Packet p) {
    Node& n = nodes_[at];
    switch (p.meta.kind) {
        case PacketKind::echo_request: {
            double cost = n.costs.echo_reply_ms;
            sim_.at(sim_.now() + cost, [this, at, pkt = std::move(p)]() {
                EchoHeader e = decode_echo_payload(pkt.payload);
                e.type = EchoHeader::kReply;
                const Ipv6Header& in = pkt.outer_v6();
                Packet reply = make_ipv6_packet(in.dst, in.src, proto::echo,
                                                encode_echo_payload(e, pkt.payload.size()),
                                                in.flow_label);
                reply.meta = pkt.meta;
                reply.meta.kind = PacketKind::echo_reply;
                record(TraceEvent::sent, at, reply);
                process_v6(at, std::move(reply), /*charge_forward=*/false);
            });
            return;
        }
        default:
            return;  // sink
    }
}

void Network::dispatch_udp_service(NodeId at, Packet p) {
    switch (p.meta.kind) {
        case PacketKind::setup: {
            uint8_t stage = p.payload.empty() ? 0 : p.payload[0];
            if (stage == kSetupAssign)
                client_setup_msg(at, std::move(p));
            else
                serve_setup(at, std::move(p));
            return;
        }
        case PacketKind::refresh: {
            uint8_t type = p.payload.empty() ? 0 : p.payload[0];
            if (type == kRefreshKeepalive)
                serve_refresh(at, std::move(p));
            else
                client_refresh_ack(at, std::move(p));
            return;
        }
        case PacketKind::dns_query:
            serve_dns(at, std::move(p));
            return;
        case PacketKind::dns_reply: {
            record(TraceEvent::dns_reply, at, p);
            if (p.payload.size() >= 16) {
                V6Addr answer;
                std::copy(p.payload.end() - 16, p.payload.end(), answer.bytes.begin());
                dns_answers_[at].push_back(answer);
            }
            return;
        }
        default:
            drop(at, p, DropReason::layering_mismatch);
            return;
    }
}

void Network::serve_setup(NodeId at, Packet p) {
    Node& n = nodes_[at];
    uint8_t stage = p.payload[0];
    if (stage == kSetupConfirm) {
        // Handshake complete; this row closes the setup-delay interval.
        record(TraceEvent::setup_msg, at, p);
        return;
    }
    if (!n.setup_server) {
        drop(at, p, DropReason::unknown_dest);
        return;
    }
    double cost = n.costs.setup_processing_ms;
    sim_.at(sim_.now() + cost, [this, at, pkt = std::move(p)]() {
        Node& server = nodes_[at];
        V6Addr grant;
        switch (server.served_protocol) {
            case TunnelProtocol::p6to4:
                grant = synth_6to4(server.v4);
                break;
            case TunnelProtocol::isatap:
                grant = server.served_prefix;
                break;
            case TunnelProtocol::teredo: {
                TeredoFields f;
                f.server_v4 = server.v4;
                f.flags = kTeredoConeFlag;
                f.mapped_v4 = pkt.outer_v4().src;     // post-NAT as observed here
                f.mapped_port = pkt.udp()->src_port;  // post-NAT service port
                grant = synth_teredo(f, teredo_prefix);
                break;
            }
        }
        Packet assign = make_udp_packet(server.v4, pkt.outer_v4().src, pkt.udp()->dst_port,
                                        pkt.udp()->src_port, setup_payload(kSetupAssign, grant));
        assign.meta.packet_id = alloc_packet_id();
        assign.meta.kind = PacketKind::setup;
        record(TraceEvent::setup_msg, at, assign);
        originate_v4(at, std::move(assign));
    });
}

void Network::client_setup_msg(NodeId at, Packet p) {
    Node& n = nodes_[at];
    if (!n.tunnel) {
        drop(at, p, DropReason::unknown_dest);
        return;
    }
    TunnelClient& client = *n.tunnel;
    V6Addr prefix;
    std::copy(p.payload.begin() + 1, p.payload.begin() + 17, prefix.bytes.begin());

    switch (client.state.protocol) {
        case TunnelProtocol::p6to4:
            client.self_addr = with_interface_id(prefix, client.iface_id);
            break;
        case TunnelProtocol::isatap:
            client.self_addr = synth_isatap(prefix, n.v4);
            break;
        case TunnelProtocol::teredo:
            client.self_addr = prefix;  // the grant is the full address
            break;
    }
    n.v6_addrs.push_back(client.self_addr);
    client.state.establish(prefix, rng_);

    Packet confirm = make_udp_packet(n.v4, client.server_v4,
                                     client.state.protocol == TunnelProtocol::teredo
                                         ? kTeredoPort
                                         : kControlClientPort,
                                     client.server_port, setup_payload(kSetupConfirm));
    confirm.meta.packet_id = alloc_packet_id();
    confirm.meta.kind = PacketKind::setup;
    originate_control(at, std::move(confirm), TraceEvent::setup_msg);
}

void Network::serve_refresh(NodeId at, Packet p) {
    Node& n = nodes_[at];
    if (!n.setup_server) {
        drop(at, p, DropReason::unknown_dest);
        return;
    }
    double cost = n.costs.refresh_processing_ms;
    sim_.at(sim_.now() + cost, [this, at, pkt = std::move(p)]() {
        Node& server = nodes_[at];
        Packet ack = make_udp_packet(server.v4, pkt.outer_v4().src, pkt.udp()->dst_port,
                                     pkt.udp()->src_port, refresh_payload(kRefreshAck));
        ack.meta.packet_id = alloc_packet_id();
        ack.meta.kind = PacketKind::refresh;
        originate_v4(at, std::move(ack));
    });
}

void Network::client_refresh_ack(NodeId at, Packet p) {
    Node& n = nodes_[at];
    if (!n.tunnel) {
        drop(at, p, DropReason::unknown_dest);
        return;
    }
    n.tunnel->refresh_in_flight = false;
    flush_held(at);
}

void Network::flush_held(NodeId at) {
    Node& n = nodes_[at];
    std::vector<Packet> held = std::move(n.tunnel->held);
    n.tunnel->held.clear();
    for (auto& p : held) {
        if (n.tunnel->refresh_in_flight) {
            n.tunnel->held.push_back(std::move(p));
            continue;
        }
        send_tunneled(at, std::move(p));
    }
}

void Network::emit_refresh(NodeId src) {
    Node& n = nodes_[src];
    TunnelClient& client = *n.tunnel;
    uint16_t src_port = client.state.protocol == TunnelProtocol::teredo ? kTeredoPort
                                                                        : kControlClientPort;
    Packet keepalive = make_udp_packet(n.v4, client.server_v4, src_port, client.server_port,
                                       refresh_payload(kRefreshKeepalive));
    keepalive.meta.packet_id = alloc_packet_id();
    keepalive.meta.kind = PacketKind::refresh;
    client.refresh_in_flight = true;
    originate_control(src, std::move(keepalive), TraceEvent::refresh);
}

void Network::send_tunneled(NodeId src, Packet inner) {
    process_v6(src, std::move(inner), /*charge_forward=*/false);
}

void Network::originate(NodeId src, Packet p) {
    record(TraceEvent::sent, src, p);
    Node& n = nodes_[src];

    if (n.tunnel) {
        TunnelClient& client = *n.tunnel;
        if (client.state.phase != TunnelPhase::established)
            throw TunnelError("flow packet before tunnel establishment on " + n.name);
        if (p.meta.kind == PacketKind::data && client.state.on_data_sent(rng_)) {
            // Keepalive due: it precedes this packet, which stalls until the
            // refresh round trip completes.
            emit_refresh(src);
        }
        if (client.refresh_in_flight) {
            client.held.push_back(std::move(p));
            return;
        }
        send_tunneled(src, std::move(p));
        return;
    }
    process_v6(src, std::move(p), /*charge_forward=*/false);
}

void Network::originate_control(NodeId src, Packet p, TraceEvent milestone) {
    record(milestone, src, p);
    originate_v4(src, std::move(p));
}

void Network::start_tunnel_setup(NodeId client_id) {
    Node& n = nodes_[client_id];
    if (!n.tunnel) throw TunnelError("node " + n.name + " has no tunnel client");
    TunnelClient& client = *n.tunnel;
    if (client.server_v4.value == 0)
        throw TunnelError("no setup server configured for " + n.name);
    client.state.begin_setup();
    uint16_t src_port = client.state.protocol == TunnelProtocol::teredo ? kTeredoPort
                                                                        : kControlClientPort;
    Packet req = make_udp_packet(n.v4, client.server_v4, src_port, client.server_port,
                                 setup_payload(kSetupRequest));
    req.meta.packet_id = alloc_packet_id();
    req.meta.kind = PacketKind::setup;
    originate_control(client_id, std::move(req), TraceEvent::setup_msg);
}

void Network::send_dns_query(NodeId client_id, const std::string& name) {
    Node& n = nodes_[client_id];
    NodeId dns_id = kNoLink;
    for (const auto& d : nodes_)
        if (d.role == NodeRole::dns) dns_id = d.id;
    if (dns_id == kNoLink) throw TopologyError("no DNS node in topology");
    Packet q = make_udp_packet(n.v4, nodes_[dns_id].v4, kDnsClientPort, kDnsPort,
                               dns_query_payload(name));
    q.meta.packet_id = alloc_packet_id();
    q.meta.kind = PacketKind::dns_query;
    originate_control(client_id, std::move(q), TraceEvent::dns_query);
}

void Network::serve_dns(NodeId at, Packet p) {
    Node& n = nodes_[at];
    std::string name = dns_query_name(p.payload);
    auto it = n.dns_zone.find(name);
    if (it == n.dns_zone.end()) {
        drop(at, p, DropReason::unknown_dest);  // resolution failure record
        return;
    }
    double cost = n.costs.dns_lookup_ms;
    V6Addr answer = it->second;
    sim_.at(sim_.now() + cost, [this, at, answer, pkt = std::move(p)]() {
        Node& server = nodes_[at];
        Packet reply = make_udp_packet(server.v4, pkt.outer_v4().src, kDnsPort,
                                       pkt.udp()->src_port,
                                       dns_reply_payload(pkt.payload, answer));
        reply.meta.packet_id = alloc_packet_id();
        reply.meta.kind = PacketKind::dns_reply;
        originate_v4(at, std::move(reply));
    });
}

void Network::run(SimTime until, uint64_t max_events) {
    sim_.run(until, max_events);
}

const std::vector<V6Addr>& Network::dns_answers(NodeId node) const {
    static const std::vector<V6Addr> empty;
    auto it = dns_answers_.find(node);
    return it == dns_answers_.end() ? empty : it->second;
}

}  // namespace tunsim
