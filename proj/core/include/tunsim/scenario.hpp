#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tunsim/config.hpp"
#include "tunsim/metrics.hpp"
#include "tunsim/topology.hpp"
#include "tunsim/traffic.hpp"

namespace tunsim {

enum class ScenarioProtocol : uint8_t { p6to4, teredo, isatap, baseline };

const char* to_string(ScenarioProtocol p);
std::optional<ScenarioProtocol> parse_protocol(const std::string& s);

// Per-protocol tunnel processing costs forming a calibration profile.
struct TunnelCosts {
    double encap_fixed_ms = 0.0;
    double encap_per_byte_ms = 0.0;
    double decap_fixed_ms = 0.0;
    double decap_per_byte_ms = 0.0;
    double setup_processing_ms = 0.0;
    double refresh_processing_ms = 0.0;
    std::optional<double> dns_lookup_ms;  // overrides the base DNS cost
};

struct CalibrationProfile {
    std::string name;
    LinkSpec link;
    double forward_ms = 0.0;
    double echo_reply_ms = 0.0;
    double nat_translate_ms = 0.0;
    double dns_lookup_ms = 0.0;
    TunnelCosts p6to4;
    TunnelCosts teredo;
    TunnelCosts isatap;

    const TunnelCosts& for_protocol(ScenarioProtocol p) const;

    static CalibrationProfile load(const ConfigFile& cfg);
};

struct ScenarioConfig {
    std::string name;
    ScenarioProtocol protocol = ScenarioProtocol::baseline;
    std::string calibration;      // profile name, resolved against the config dir
    uint32_t replications = 1;
    uint64_t base_seed = 1;
    double setup_at_ms = 1000.0;
    double dns_query_at_ms = 5000.0;
    bool include_nat = true;      // Teredo only; disabling it fails validation
    bool include_server = true;   // setup server present
    uint64_t max_events = Simulator::kDefaultMaxEvents;
    V6Addr teredo_prefix;
    std::vector<FlowPlan> flows;  // src/dst filled by the topology builder
    uint64_t config_hash = 0;

    static ScenarioConfig load(const ConfigFile& cfg);

    // Structural checks: replication count, protocol/topology consistency
    // (a Teredo run without its NAT is a configuration error), flow sanity.
    void validate() const;
};

// Fig-4/Fig-5 style chains: sender - [nat] - r1 - core - [relay] - r2 -
// receiver with DNS (and the Teredo server) off the core. Returns the built
// network plus the ids the runner needs.
struct BuiltTopology {
    Network net;
    NodeId sender = 0;
    NodeId receiver = 0;
    NodeId dns = 0;
    std::vector<FlowPlan> flows;  // scenario flows with endpoints resolved

    explicit BuiltTopology(uint64_t seed) : net(seed) {}
};

BuiltTopology build_topology(const ScenarioConfig& scenario, const CalibrationProfile& calib,
                             uint64_t seed);

// Auxiliary (tunneling-specific) devices present in a built network.
AuxDevices count_auxiliary_devices(const Network& net);

}  // namespace tunsim
