#include "tunsim/scenario.hpp"

#include <algorithm>

#include "tunsim/addressing.hpp"

namespace tunsim {

const char* to_string(ScenarioProtocol p) {
    switch (p) {
        case ScenarioProtocol::p6to4: return "6to4";
        case ScenarioProtocol::teredo: return "teredo";
        case ScenarioProtocol::isatap: return "isatap";
        case ScenarioProtocol::baseline: return "baseline";
    }
    return "?";
}

std::optional<ScenarioProtocol> parse_protocol(const std::string& s) {
    if (s == "6to4") return ScenarioProtocol::p6to4;
    if (s == "teredo") return ScenarioProtocol::teredo;
    if (s == "isatap") return ScenarioProtocol::isatap;
    if (s == "baseline") return ScenarioProtocol::baseline;
    return std::nullopt;
}

const TunnelCosts& CalibrationProfile::for_protocol(ScenarioProtocol p) const {
    switch (p) {
        case ScenarioProtocol::p6to4: return p6to4;
        case ScenarioProtocol::teredo: return teredo;
        default: return isatap;
    }
}

namespace {

TunnelCosts load_tunnel_costs(const ConfigFile& cfg, const std::string& section) {
    TunnelCosts c;
    c.encap_fixed_ms = cfg.get_double(section, "encap_fixed_ms", 0.0);
    c.encap_per_byte_ms = cfg.get_double(section, "encap_per_byte_ms", 0.0);
    c.decap_fixed_ms = cfg.get_double(section, "decap_fixed_ms", 0.0);
    c.decap_per_byte_ms = cfg.get_double(section, "decap_per_byte_ms", 0.0);
    c.setup_processing_ms = cfg.get_double(section, "setup_processing_ms", 0.0);
    c.refresh_processing_ms = cfg.get_double(section, "refresh_processing_ms", 0.0);
    if (cfg.has_key(section, "dns_lookup_ms"))
        c.dns_lookup_ms = cfg.get_double(section, "dns_lookup_ms");
    return c;
}

}  // namespace

CalibrationProfile CalibrationProfile::load(const ConfigFile& cfg) {
    CalibrationProfile p;
    p.name = cfg.get_string("profile", "name", "unnamed");
    p.link.delay_ms = cfg.get_double("links", "delay_ms", 0.0);
    p.link.rate_bits_per_ms = cfg.get_double("links", "rate_bits_per_ms", 0.0);
    p.link.mtu_bytes = uint32_t(cfg.get_int("links", "mtu_bytes", 2000));
    if (p.link.delay_ms < 0.0)
        throw ConfigError(cfg.origin() + ": [links] delay_ms must be non-negative");
    if (p.link.rate_bits_per_ms < 0.0)
        throw ConfigError(cfg.origin() + ": [links] rate_bits_per_ms must be non-negative");
    p.forward_ms = cfg.get_double("node", "forward_ms", 0.0);
    p.echo_reply_ms = cfg.get_double("node", "echo_reply_ms", 0.0);
    p.nat_translate_ms = cfg.get_double("node", "nat_translate_ms", 0.0);
    p.dns_lookup_ms = cfg.get_double("node", "dns_lookup_ms", 0.0);
    p.p6to4 = load_tunnel_costs(cfg, "6to4");
    p.teredo = load_tunnel_costs(cfg, "teredo");
    p.isatap = load_tunnel_costs(cfg, "isatap");
    return p;
}

ScenarioConfig ScenarioConfig::load(const ConfigFile& cfg) {
    ScenarioConfig s;
    s.name = cfg.get_string("scenario", "name");
    auto proto = parse_protocol(cfg.get_string("scenario", "protocol"));
    if (!proto)
        throw ConfigError(cfg.origin() + ": [scenario] protocol: expected 6to4|teredo|isatap|baseline");
    s.protocol = *proto;
    s.calibration = cfg.get_string("scenario", "calibration", "paper-default");
    s.replications = uint32_t(cfg.get_int("scenario", "replications", 1));
    s.base_seed = uint64_t(cfg.get_int("scenario", "seed", 1));
    s.max_events = uint64_t(cfg.get_int("scenario", "max_events", int64_t(Simulator::kDefaultMaxEvents)));
    s.setup_at_ms = cfg.get_double("timeline", "setup_at_ms", 1000.0);
    s.dns_query_at_ms = cfg.get_double("timeline", "dns_query_at_ms", 5000.0);
    s.include_nat = cfg.get_bool("topology", "nat", s.protocol == ScenarioProtocol::teredo);
    s.include_server = cfg.get_bool("topology", "server", true);

    std::string prefix_text = cfg.get_string("topology", "teredo_prefix", "2001::");
    auto prefix = parse_v6(prefix_text);
    if (!prefix)
        throw ConfigError(cfg.origin() + ": [topology] teredo_prefix: not an IPv6 address");
    s.teredo_prefix = *prefix;

    uint32_t next_flow_id = 1;
    for (const std::string& section : cfg.section_names()) {
        if (section.rfind("flow.", 0) != 0) continue;
        FlowPlan f;
        f.flow_id = next_flow_id++;
        std::string kind = cfg.get_string(section, "kind", "udp_stream");
        if (kind == "udp_stream") {
            f.kind = FlowKind::udp_stream;
            std::string preset = cfg.get_string(section, "preset", "");
            if (preset == "audio") f.rate_pps = kAudioRatePps;
            else if (preset == "video") f.rate_pps = kVideoRatePps;
            else if (!preset.empty())
                throw ConfigError(cfg.origin() + ": [" + section + "] preset: expected audio|video");
            f.rate_pps = cfg.get_double(section, "rate_pps", f.rate_pps);
            f.duration_s = cfg.get_double(section, "duration_s", 0.0);
        } else if (kind == "ping") {
            f.kind = FlowKind::ping;
            f.count = uint32_t(cfg.get_int(section, "count", 0));
            f.interval_ms = cfg.get_double(section, "interval_ms", 1000.0);
        } else {
            throw ConfigError(cfg.origin() + ": [" + section + "] kind: expected udp_stream|ping");
        }
        f.payload_bytes = uint32_t(cfg.get_int(section, "payload_bytes",
                                               f.kind == FlowKind::ping ? 16 : kDefaultPayloadBytes));
        f.start_ms = cfg.get_double(section, "start_ms", 0.0);
        s.flows.push_back(f);
    }

    s.config_hash = cfg.content_hash();
    return s;
}

void ScenarioConfig::validate() const {
    if (replications < 1) throw ConfigError(name + ": replications must be >= 1");
    if (protocol == ScenarioProtocol::teredo && !include_nat)
        throw ConfigError(name + ": a Teredo scenario requires the NAT node; "
                          "Teredo exists to carry IPv6 through IPv4 NAT");
    if (protocol == ScenarioProtocol::baseline && !include_nat) {
        // nothing: the baseline has no NAT either way
    }
    for (const FlowPlan& f : flows) {
        if (f.payload_bytes == 0) throw ConfigError(name + ": flow payload must be positive");
        if (f.kind == FlowKind::udp_stream && (f.rate_pps <= 0 || f.duration_s <= 0))
            throw ConfigError(name + ": stream flows need positive rate and duration");
        if (f.kind == FlowKind::ping && f.count == 0)
            throw ConfigError(name + ": ping flows need a positive probe count");
        if (protocol != ScenarioProtocol::baseline && f.start_ms <= setup_at_ms)
            throw ConfigError(name + ": flows must start after tunnel setup");
    }
}

namespace {

V6Addr must_v6(const char* text) {
    auto a = parse_v6(text);
    if (!a) throw TopologyError(std::string("bad literal: ") + text);
    return *a;
}

V4Addr must_v4(const char* text) {
    auto a = parse_v4(text);
    if (!a) throw TopologyError(std::string("bad literal: ") + text);
    return *a;
}

}  // namespace

BuiltTopology build_topology(const ScenarioConfig& scenario, const CalibrationProfile& calib,
                             uint64_t seed) {
    scenario.validate();

    const ScenarioProtocol sp = scenario.protocol;
    const bool teredo = sp == ScenarioProtocol::teredo;
    const bool p6to4 = sp == ScenarioProtocol::p6to4;
    const bool isatap = sp == ScenarioProtocol::isatap;
    const bool baseline = sp == ScenarioProtocol::baseline;
    const TunnelCosts& tc = calib.for_protocol(sp);

    BuiltTopology built(seed);
    Network& net = built.net;
    net.teredo_prefix = scenario.teredo_prefix;

    OpCosts plain;
    plain.forward_ms = calib.forward_ms;
    plain.echo_reply_ms = calib.echo_reply_ms;

    OpCosts tunnel_costs = plain;
    tunnel_costs.encap_fixed_ms = tc.encap_fixed_ms;
    tunnel_costs.encap_per_byte_ms = tc.encap_per_byte_ms;
    tunnel_costs.decap_fixed_ms = tc.decap_fixed_ms;
    tunnel_costs.decap_per_byte_ms = tc.decap_per_byte_ms;

    // Address plan. The sender site is VN2 (IPv4); the receiver lives in the
    // IPv6-only part (VN1/VN3); everything in between is the IPv4 transit.
    const V4Addr sender_v4 = must_v4("10.1.0.10");
    const V4Addr r1_v4 = must_v4("198.51.100.1");
    const V4Addr core_v4 = must_v4("203.0.113.1");
    const V4Addr r2_v4 = must_v4("198.51.100.2");
    const V4Addr dns_v4 = must_v4("203.0.113.53");
    const V4Addr relay_v4 = must_v4("203.0.113.66");
    const V4Addr server_v4 = must_v4("203.0.113.80");
    const V4Addr nat_ext_v4 = must_v4("198.51.100.10");
    const V6Addr receiver_v6 = must_v6("2001:db8:10::2");
    const V6Addr r2_v6 = must_v6("2001:db8:10::1");
    const V6Addr isatap_prefix = must_v6("2001:db8:5::");
    const V6Addr recv_net = must_v6("2001:db8:10::");
    const V6Addr sender_net = must_v6("2001:db8:2::");

    StackMode transit = baseline ? StackMode::dual : StackMode::v4_only;

    NodeId sender = net.add_node("sender", NodeRole::host, StackMode::dual, tunnel_costs);
    NodeId r1 = net.add_node("r1", NodeRole::router, StackMode::dual, tunnel_costs);
    NodeId core = net.add_node("core", NodeRole::router, transit, plain);
    NodeId r2 = net.add_node("r2", NodeRole::router, StackMode::dual, tunnel_costs);
    NodeId receiver = net.add_node("receiver", NodeRole::host,
                                   baseline ? StackMode::dual : StackMode::v6_only, plain);
    OpCosts dns_costs = plain;
    dns_costs.dns_lookup_ms = tc.dns_lookup_ms.value_or(calib.dns_lookup_ms);
    NodeId dns = net.add_node("dns", NodeRole::dns, StackMode::v4_only, dns_costs);

    NodeId nat = kNoLink, relay = kNoLink, tserver = kNoLink;

    net.node(sender).v4 = sender_v4;
    net.node(r1).v4 = r1_v4;
    net.node(core).v4 = core_v4;
    net.node(r2).v4 = r2_v4;
    net.node(dns).v4 = dns_v4;
    net.node(receiver).v6_addrs.push_back(receiver_v6);
    net.node(r2).v6_addrs.push_back(r2_v6);

    LinkId l_sender_r1 = kNoLink, l_sender_nat = kNoLink, l_nat_r1 = kNoLink;
    LinkId l_r1_core = net.add_link(r1, core, calib.link);
    LinkId l_core_r2 = net.add_link(core, r2, calib.link);
    LinkId l_r2_recv = net.add_link(r2, receiver, calib.link);
    LinkId l_core_dns = net.add_link(core, dns, calib.link);
    LinkId l_core_relay = kNoLink, l_relay_r2 = kNoLink, l_core_srv = kNoLink;

    if (teredo && scenario.include_nat) {
        OpCosts nat_costs = plain;
        nat_costs.nat_translate_ms = calib.nat_translate_ms;
        nat = net.add_node("nat", NodeRole::nat, StackMode::v4_only, nat_costs);
        net.node(nat).v4 = nat_ext_v4;
        net.node(nat).nat.emplace(nat_ext_v4);
        l_sender_nat = net.add_link(sender, nat, calib.link);
        l_nat_r1 = net.add_link(nat, r1, calib.link);
        net.node(nat).nat_internal_link = l_sender_nat;
    } else {
        l_sender_r1 = net.add_link(sender, r1, calib.link);
    }

    if (p6to4) {
        relay = net.add_node("relay6to4", NodeRole::relay, StackMode::dual, tunnel_costs);
        net.node(relay).v4 = relay_v4;
        net.node(relay).auxiliary = true;
        net.node(relay).aux_device_name = "6to4 Relay";
        l_core_relay = net.add_link(core, relay, calib.link);
        l_relay_r2 = net.add_link(relay, r2, calib.link);
    }

    if (teredo && scenario.include_server) {
        OpCosts srv = plain;
        srv.setup_processing_ms = tc.setup_processing_ms;
        srv.refresh_processing_ms = tc.refresh_processing_ms;
        tserver = net.add_node("teredo-server", NodeRole::server, StackMode::v4_only, srv);
        net.node(tserver).v4 = server_v4;
        net.node(tserver).auxiliary = true;
        net.node(tserver).aux_device_name = "Teredo Server";
        net.node(tserver).setup_server = true;
        net.node(tserver).served_protocol = TunnelProtocol::teredo;
        l_core_srv = net.add_link(core, tserver, calib.link);
    }

    // Tunnel roles and the setup server per protocol.
    if (p6to4) {
        Node& router = net.node(r1);
        if (scenario.include_server) {
            router.setup_server = true;
            router.served_protocol = TunnelProtocol::p6to4;
            router.costs.setup_processing_ms = tc.setup_processing_ms;
            router.costs.refresh_processing_ms = tc.refresh_processing_ms;
        }
        router.decaps_proto41 = true;
        net.node(relay).decaps_proto41 = true;

        Node& host = net.node(sender);
        host.tunnel.emplace(TunnelProtocol::p6to4);
        host.tunnel->server_v4 = scenario.include_server ? r1_v4 : V4Addr{};
        host.tunnel->state.server_node = r1;
        host.tunnel->iface_id = 1;
    } else if (isatap) {
        Node& router = net.node(r2);
        if (scenario.include_server) {
            router.setup_server = true;
            router.served_protocol = TunnelProtocol::isatap;
            router.served_prefix = isatap_prefix;
            router.costs.setup_processing_ms = tc.setup_processing_ms;
            router.costs.refresh_processing_ms = tc.refresh_processing_ms;
        }
        router.decaps_proto41 = true;

        Node& host = net.node(sender);
        host.tunnel.emplace(TunnelProtocol::isatap);
        host.tunnel->server_v4 = scenario.include_server ? r2_v4 : V4Addr{};
        host.tunnel->state.server_node = r2;
        host.tunnel->relay_v4 = r2_v4;
        host.decaps_proto41 = true;
    } else if (teredo) {
        Node& relay_router = net.node(r2);
        relay_router.teredo_endpoint = true;

        Node& host = net.node(sender);
        host.tunnel.emplace(TunnelProtocol::teredo);
        host.tunnel->server_v4 = (tserver != kNoLink) ? server_v4 : V4Addr{};
        host.tunnel->state.server_node = tserver;
        host.tunnel->server_port = kTeredoPort;
        host.tunnel->relay_v4 = r2_v4;
        host.teredo_endpoint = true;
    } else {
        net.node(sender).v6_addrs.push_back(with_interface_id(sender_net, 0x10));
    }

    // IPv4 routing.
    auto& S = net.node(sender);
    S.v4_routes.push_back({V4Addr{}, 0, teredo ? l_sender_nat : l_sender_r1});
    if (nat != kNoLink) {
        net.node(nat).v4_routes.push_back({must_v4("10.1.0.0"), 24, l_sender_nat});
        net.node(nat).v4_routes.push_back({V4Addr{}, 0, l_nat_r1});
    }
    auto& R1 = net.node(r1);
    if (teredo) {
        R1.v4_routes.push_back({nat_ext_v4, 32, l_nat_r1});
        R1.v4_routes.push_back({must_v4("10.1.0.0"), 24, l_nat_r1});
    } else {
        R1.v4_routes.push_back({must_v4("10.1.0.0"), 24, l_sender_r1});
    }
    R1.v4_routes.push_back({V4Addr{}, 0, l_r1_core});
    auto& C = net.node(core);
    C.v4_routes.push_back({must_v4("10.1.0.0"), 24, l_r1_core});
    C.v4_routes.push_back({r1_v4, 32, l_r1_core});
    C.v4_routes.push_back({nat_ext_v4, 32, l_r1_core});
    C.v4_routes.push_back({r2_v4, 32, l_core_r2});
    C.v4_routes.push_back({dns_v4, 32, l_core_dns});
    if (relay != kNoLink) C.v4_routes.push_back({relay_v4, 32, l_core_relay});
    if (tserver != kNoLink) C.v4_routes.push_back({server_v4, 32, l_core_srv});
    net.node(r2).v4_routes.push_back({V4Addr{}, 0, l_core_r2});
    net.node(dns).v4_routes.push_back({V4Addr{}, 0, l_core_dns});
    if (relay != kNoLink) net.node(relay).v4_routes.push_back({V4Addr{}, 0, l_core_relay});
    if (tserver != kNoLink) net.node(tserver).v4_routes.push_back({V4Addr{}, 0, l_core_srv});

    // IPv6 routing.
    net.node(receiver).v6_routes.push_back({V6Addr{}, 0, V6Action::forward, l_r2_recv, {}, {}});
    auto& R2 = net.node(r2);
    R2.v6_routes.push_back({recv_net, 64, V6Action::forward, l_r2_recv, {}, {}});
    if (p6to4) {
        V6Addr p2002;
        p2002.set_group(0, k6to4Prefix);
        R2.v6_routes.push_back({p2002, 16, V6Action::forward, l_relay_r2, {}, {}});
        auto& RL = net.node(relay);
        RL.v6_routes.push_back({p2002, 16, V6Action::extract_6to4, kNoLink, {}, {}});
        RL.v6_routes.push_back({V6Addr{}, 0, V6Action::forward, l_relay_r2, {}, {}});
        auto& R1v6 = net.node(r1);
        V6Addr site = synth_6to4(r1_v4);
        R1v6.v6_routes.push_back({site, k6to4SitePrefixBits, V6Action::forward, l_sender_r1, {}, {}});
        R1v6.v6_routes.push_back({p2002, 16, V6Action::extract_6to4, kNoLink, {}, {}});
        R1v6.v6_routes.push_back({V6Addr{}, 0, V6Action::tunnel_to, kNoLink, relay_v4,
                                  TunnelProtocol::p6to4});
        S.v6_routes.push_back({V6Addr{}, 0, V6Action::forward, l_sender_r1, {}, {}});
    } else if (isatap) {
        R2.v6_routes.push_back({isatap_prefix, kIsatapPrefixBits, V6Action::extract_isatap,
                                kNoLink, {}, {}});
        S.v6_routes.push_back({isatap_prefix, kIsatapPrefixBits, V6Action::extract_isatap,
                               kNoLink, {}, {}});
        S.v6_routes.push_back({V6Addr{}, 0, V6Action::tunnel_to, kNoLink, r2_v4,
                               TunnelProtocol::isatap});
    } else if (teredo) {
        R2.v6_routes.push_back({scenario.teredo_prefix, 32, V6Action::extract_teredo,
                                kNoLink, {}, {}});
        S.v6_routes.push_back({V6Addr{}, 0, V6Action::tunnel_to, kNoLink, r2_v4,
                               TunnelProtocol::teredo});
    } else {
        // Baseline: native IPv6 end to end over dual-stack transit.
        S.v6_routes.push_back({V6Addr{}, 0, V6Action::forward, l_sender_r1, {}, {}});
        auto& R1v6 = net.node(r1);
        R1v6.v6_routes.push_back({sender_net, 64, V6Action::forward, l_sender_r1, {}, {}});
        R1v6.v6_routes.push_back({V6Addr{}, 0, V6Action::forward, l_r1_core, {}, {}});
        C.v6_routes.push_back({recv_net, 64, V6Action::forward, l_core_r2, {}, {}});
        C.v6_routes.push_back({V6Addr{}, 0, V6Action::forward, l_r1_core, {}, {}});
        R2.v6_routes.push_back({V6Addr{}, 0, V6Action::forward, l_core_r2, {}, {}});
    }

    // DNS zone: the receiver's published name.
    net.node(dns).dns_zone["receiver.v6.test"] = receiver_v6;

    // Flows between the fixed endpoints of this topology.
    built.sender = sender;
    built.receiver = receiver;
    built.dns = dns;
    built.flows = scenario.flows;
    for (FlowPlan& f : built.flows) {
        f.src = sender;
        f.dst = receiver;
    }
    return built;
}

AuxDevices count_auxiliary_devices(const Network& net) {
    AuxDevices aux;
    for (std::size_t i = 0; i < net.node_count(); ++i) {
        const Node& n = net.node(NodeId(i));
        if (n.auxiliary) {
            ++aux.count;
            aux.names.push_back(n.aux_device_name);
        }
    }
    return aux;
}

}  // namespace tunsim
