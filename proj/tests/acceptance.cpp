// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Uses the checked-in scenario and calibration configs.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tunsim/addressing.hpp"
#include "tunsim/codec.hpp"
#include "tunsim/config.hpp"
#include "tunsim/metrics.hpp"
#include "tunsim/nat.hpp"
#include "tunsim/report.hpp"
#include "tunsim/runner.hpp"
#include "tunsim/scenario.hpp"
#include "tunsim/tunnel.hpp"

using namespace tunsim;

namespace {

int g_failures = 0;
std::vector<std::string> g_notes;

void expect(bool ok, const std::string& what) {
    if (!ok) {
        ++g_failures;
        g_notes.push_back(what);
    }
}

void criterion(int number, const char* title, int failures_before) {
    bool ok = g_failures == failures_before;
    std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", number, title);
    if (!ok) {
        for (const auto& n : g_notes) std::printf("       - %s\n", n.c_str());
    }
    g_notes.clear();
}

std::string cfg_dir() {
    return TUNSIM_CONFIG_DIR;
}

ScenarioConfig load_scenario(const std::string& name) {
    return ScenarioConfig::load(ConfigFile::parse_file(cfg_dir() + "/" + name + ".cfg"));
}

CalibrationProfile load_calibration() {
    return CalibrationProfile::load(ConfigFile::parse_file(cfg_dir() + "/paper-default.cfg"));
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double value_of(const ComparisonReport& r, const std::string& param, const std::string& proto) {
    for (const auto& p : r.parameters) {
        if (p.parameter != param) continue;
        for (std::size_t i = 0; i < p.protocols.size(); ++i)
            if (p.protocols[i] == proto) return p.values[i];
    }
    return std::nan("");
}

int rank_of(const ComparisonReport& r, const std::string& param, const std::string& proto) {
    for (const auto& p : r.parameters)
        if (p.parameter == param) return p.rank_of(proto);
    return 0;
}

// ---------------------------------------------------------------- criteria

void criterion_1_metric_oracles() {
    int before = g_failures;

    struct {
        double variance, stddev;
    } table[] = {
        {6.0445e-05, 0.007774638},
        {0.000101775, 0.010088351},
        {2.05711e-05, 0.004535538},
    };
    for (const auto& row : table) {
        std::vector<double> sample{0.0, 2.0 * std::sqrt(row.variance)};  // variance = v
        double s = stddev(sample);
        expect(std::fabs(s - row.stddev) < 1e-8,
               "stddev(" + std::to_string(row.variance) + ") off by more than 1e-8");
        expect(std::fabs(std::sqrt(variance(sample)) - s) < 1e-15, "stddev != sqrt(variance)");
    }

    double kbps = throughput_kbps(41.4183);
    expect(std::fabs(kbps - 497.02) < 0.01,
           "kbps conversion: 41.4183 pps -> " + std::to_string(kbps) + " Kbps, expected 497.02 +- 0.01");

    criterion(1, "metric-engine oracle suite (exact)", before);
}

void criterion_2_codec_vectors() {
    int before = g_failures;

    expect(to_string(synth_6to4(parse_v4("192.88.99.1").value())) == "2002:c058:6301::",
           "6to4 vector mismatch");
    expect(to_string(synth_isatap(parse_v6("fe80::").value(), parse_v4("10.0.0.5").value())) ==
               "fe80::5efe:a00:5",
           "ISATAP vector mismatch");
    TeredoFields f;
    f.server_v4 = parse_v4("65.54.227.120").value();
    f.flags = kTeredoConeFlag;
    f.mapped_port = 40000;
    f.mapped_v4 = parse_v4("192.0.2.45").value();
    expect(to_string(synth_teredo(f, teredo_default_prefix())) ==
               "2001:0:4136:e378:8000:63bf:3fff:fdd2",
           "Teredo vector mismatch");

    std::mt19937_64 rng(2024);
    int failures = 0;
    for (int i = 0; i < 10000; ++i) {
        V6Addr src, dst;
        for (auto& b : src.bytes) b = uint8_t(rng());
        for (auto& b : dst.bytes) b = uint8_t(rng());
        Packet p = make_ipv6_packet(src, dst, proto::udp,
                                    std::vector<uint8_t>(rng() % 1460, uint8_t(rng())),
                                    uint32_t(rng() % (1u << 20)));
        int shape = int(rng() % 3);
        if (shape == 1) {
            Ipv4Header outer;
            outer.src.value = uint32_t(rng());
            outer.dst.value = uint32_t(rng());
            outer.protocol = proto::ipv6_in_ipv4;
            outer.total_len = uint16_t(20 + encoded_size(p));
            p.layers.insert(p.layers.begin(), outer);
            refresh_checksums(p);
        } else if (shape == 2) {
            std::size_t inner = encoded_size(p);
            UdpHeader udp;
            udp.src_port = kTeredoPort;
            udp.dst_port = kTeredoPort;
            udp.length = uint16_t(8 + inner);
            Ipv4Header outer;
            outer.src.value = uint32_t(rng());
            outer.dst.value = uint32_t(rng());
            outer.protocol = proto::udp;
            outer.total_len = uint16_t(28 + inner);
            p.layers.insert(p.layers.begin(), udp);
            p.layers.insert(p.layers.begin(), outer);
            refresh_checksums(p);
        }
        if (!(decode(encode(p)) == p)) ++failures;
    }
    expect(failures == 0, std::to_string(failures) + " round-trip failures out of 10000");

    TunnelState st6(TunnelProtocol::p6to4), sti(TunnelProtocol::isatap),
        stt(TunnelProtocol::teredo);
    Rng r(1);
    for (auto* st : {&st6, &sti, &stt}) {
        st->begin_setup();
        st->establish(V6Addr{}, r);
    }
    Packet inner = make_ipv6_packet(parse_v6("2001:db8::1").value(),
                                    parse_v6("2001:db8::2").value(), proto::udp,
                                    std::vector<uint8_t>(1500, 0));
    V4Addr a = parse_v4("192.0.2.1").value(), b = parse_v4("192.0.2.2").value();
    expect(encoded_size(encap(inner, st6, a, b)) == encoded_size(inner) + 20,
           "6to4 overhead != 20");
    expect(encoded_size(encap(inner, sti, a, b)) == encoded_size(inner) + 20,
           "ISATAP overhead != 20");
    expect(encoded_size(encap(inner, stt, a, b)) == encoded_size(inner) + 28,
           "Teredo overhead != 28");

    criterion(2, "codec/address vectors (exact)", before);
}

void criterion_3_refresh_cadence() {
    int before = g_failures;

    auto count = [](TunnelProtocol p, uint64_t seed) {
        TunnelState st(p);
        Rng rng(seed);
        st.begin_setup();
        st.establish(V6Addr{}, rng);
        int refreshes = 0;
        for (int i = 0; i < 1000; ++i)
            if (st.on_data_sent(rng)) ++refreshes;
        return refreshes;
    };

    expect(count(TunnelProtocol::isatap, 1) == 76, "ISATAP refreshes per 1000 != 76");
    expect(count(TunnelProtocol::teredo, 1) == 47, "Teredo refreshes per 1000 != 47");
    for (uint64_t seed = 0; seed < 64; ++seed) {
        int n = count(TunnelProtocol::p6to4, seed);
        expect(n >= 52 && n <= 55,
               "6to4 refreshes per 1000 out of [52,55] at seed " + std::to_string(seed) + ": " +
                   std::to_string(n));
    }

    criterion(3, "refresh cadence (exact)", before);
}

struct MatrixResult {
    std::map<std::string, MetricsSummary> averaged;
    ComparisonReport report;
};

MatrixResult run_matrix() {
    MatrixResult m;
    CalibrationProfile calib = load_calibration();
    RunOptions no_files;
    for (const char* name : {"isatap-default", "6to4-default", "teredo-default",
                             "baseline-default"}) {
        ScenarioConfig sc = load_scenario(name);
        RunArtifacts art = cmd_run(sc, calib, no_files);
        m.averaged[to_string(sc.protocol)] = art.averaged;
    }
    std::vector<MetricsSummary> tunneled{m.averaged["isatap"], m.averaged["6to4"],
                                         m.averaged["teredo"]};
    m.report = build_comparison(tunneled, m.averaged["baseline"]);
    return m;
}

void criterion_4_ranking(const MatrixResult& m) {
    int before = g_failures;
    const ComparisonReport& r = m.report;

    for (const char* param : {"throughput_kbps", "e2ed_ms", "rtt_ms", "tunneling_overhead_ms",
                              "tunnel_setup_delay_ms"}) {
        expect(rank_of(r, param, "isatap") == 1, std::string(param) + ": ISATAP not rank 1");
        expect(rank_of(r, param, "6to4") == 2, std::string(param) + ": 6to4 not rank 2");
        expect(rank_of(r, param, "teredo") == 3, std::string(param) + ": Teredo not rank 3");
    }
    expect(rank_of(r, "jitter_ms", "teredo") == 1, "jitter: Teredo not rank 1");
    expect(rank_of(r, "jitter_ms", "6to4") == 2, "jitter: 6to4 not rank 2");
    expect(rank_of(r, "jitter_ms", "isatap") == 3, "jitter: ISATAP not rank 3");

    expect(rank_of(r, "query_delay_ms", "isatap") == 1 &&
               rank_of(r, "query_delay_ms", "6to4") == 1,
           "query delay: ISATAP/6to4 not tied at rank 1");
    expect(rank_of(r, "query_delay_ms", "teredo") == 3, "query delay: Teredo not rank 3");

    expect(m.averaged.at("isatap").aux.count == 0, "ISATAP aux devices != 0");
    expect(m.averaged.at("6to4").aux.count == 1, "6to4 aux devices != 1");
    expect(m.averaged.at("teredo").aux.count == 1, "Teredo aux devices != 1");

    double ratio = m.averaged.at("teredo").e2ed_mean_ms / m.averaged.at("isatap").e2ed_mean_ms;
    expect(ratio >= 1.2 && ratio <= 1.6,
           "Teredo/ISATAP E2ED ratio " + std::to_string(ratio) + " outside [1.2, 1.6]");

    criterion(4, "reference ranking reproduction (ordering + ratio)", before);
}

void criterion_5_overhead(const MatrixResult& m) {
    int before = g_failures;
    double base_rtt = m.averaged.at("baseline").rtt_mean_ms;
    for (const char* proto : {"isatap", "6to4", "teredo"}) {
        double overhead = value_of(m.report, "tunneling_overhead_ms", proto);
        double rtt = m.averaged.at(proto).rtt_mean_ms;
        expect(overhead > 0.0, std::string(proto) + ": overhead not positive");
        expect(base_rtt < 0.05 * rtt,
               std::string(proto) + ": baseline RTT not below 5% of tunneled RTT");
    }
    criterion(5, "overhead consistency (positive, baseline << tunneled)", before);
}

void criterion_6_determinism() {
    int before = g_failures;
    namespace fs = std::filesystem;
    CalibrationProfile calib = load_calibration();
    ScenarioConfig sc = load_scenario("6to4-default");
    sc.replications = 2;

    fs::path tmp = fs::temp_directory_path() / "tunsim_acceptance_det";
    fs::remove_all(tmp);
    RunOptions a, b;
    a.out_dir = (tmp / "a").string();
    b.out_dir = (tmp / "b").string();
    RunArtifacts ra = cmd_run(sc, calib, a);
    RunArtifacts rb = cmd_run(sc, calib, b);

    expect(ra.files_written.size() == rb.files_written.size(), "file counts differ");
    expect(ra.files_written.size() == 5, "expected 2 traces + 2 metrics + 1 summary");
    for (std::size_t i = 0; i < ra.files_written.size(); ++i) {
        std::string fa = slurp(ra.files_written[i]);
        std::string fb = slurp(rb.files_written[i]);
        expect(!fa.empty() && fa == fb,
               "artifact differs between invocations: " + ra.files_written[i]);
    }
    fs::remove_all(tmp);
    criterion(6, "determinism (byte-identical artifacts)", before);
}

void criterion_7_conservation() {
    int before = g_failures;
    CalibrationProfile calib = load_calibration();

    for (const char* name : {"isatap-default", "6to4-default", "teredo-default",
                             "baseline-default"}) {
        ScenarioConfig sc = load_scenario(name);
        Trace trace;
        std::vector<std::string> names;
        (void)run_single(sc, calib, sc.base_seed, &trace, &names);

        NodeId receiver = 0, sender = 0;
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (names[i] == "receiver") receiver = NodeId(i);
            if (names[i] == "sender") sender = NodeId(i);
        }

        std::set<uint64_t> injected, delivered;
        std::size_t drops = 0, unreasoned = 0;
        std::map<uint64_t, int> delivery_count;
        for (const auto& r : trace) {
            if (r.event == TraceEvent::drop) {
                ++drops;
                if (r.reason == DropReason::none) ++unreasoned;
            }
            if (r.flow_id != 1) continue;  // the stream flow
            if (r.event == TraceEvent::sent && r.node == sender) injected.insert(r.packet_id);
            if (r.event == TraceEvent::received && r.node == receiver) {
                delivered.insert(r.packet_id);
                delivery_count[r.packet_id]++;
            }
        }
        expect(injected.size() == 12000, std::string(name) + ": expected 12000 injected");
        expect(delivered == injected, std::string(name) + ": delivered set != injected set");
        for (const auto& [id, n] : delivery_count)
            if (n != 1) expect(false, std::string(name) + ": duplicate delivery");
        expect(drops == 0, std::string(name) + ": unexpected drops in a lossless scenario");
        expect(unreasoned == 0, std::string(name) + ": drop without a reason");
    }

    // Deliberate drops must carry their reasons: bare proto-41 into a NAT,
    // and proto-41 at a node that only understands Teredo framing.
    {
        ScenarioConfig sc = load_scenario("teredo-default");
        BuiltTopology t = build_topology(sc, calib, 1);
        Network& net = t.net;
        Packet inner = make_ipv6_packet(parse_v6("2001:db8::1").value(),
                                        parse_v6("2001:db8:10::2").value(), proto::udp,
                                        std::vector<uint8_t>(64, 0));
        Ipv4Header outer;
        outer.src = parse_v4("10.1.0.10").value();
        outer.dst = parse_v4("198.51.100.2").value();
        outer.protocol = proto::ipv6_in_ipv4;
        outer.total_len = uint16_t(20 + encoded_size(inner));
        Packet p41 = inner;
        p41.layers.insert(p41.layers.begin(), outer);
        refresh_checksums(p41);
        p41.meta.packet_id = net.alloc_packet_id();
        p41.meta.kind = PacketKind::data;
        net.sim().at(1.0, [&net, &t, p41]() { net.originate_control(t.sender, p41); });
        net.run();
        bool nat_drop = false;
        for (const auto& r : net.trace())
            if (r.event == TraceEvent::drop && r.reason == DropReason::nat_proto41) nat_drop = true;
        expect(nat_drop, "proto-41 through the NAT did not drop with nat_proto41");
    }
    {
        ScenarioConfig sc = load_scenario("teredo-default");
        sc.include_nat = true;
        BuiltTopology t = build_topology(sc, calib, 1);
        Network& net = t.net;
        // hand r2 (the Teredo relay) a proto-41 packet: layering mismatch
        Packet inner = make_ipv6_packet(parse_v6("2001:db8::1").value(),
                                        parse_v6("2001:db8:10::2").value(), proto::udp,
                                        std::vector<uint8_t>(64, 0));
        Ipv4Header outer;
        outer.src = parse_v4("203.0.113.1").value();
        outer.dst = parse_v4("198.51.100.2").value();
        outer.protocol = proto::ipv6_in_ipv4;
        outer.total_len = uint16_t(20 + encoded_size(inner));
        Packet p41 = inner;
        p41.layers.insert(p41.layers.begin(), outer);
        refresh_checksums(p41);
        p41.meta.packet_id = net.alloc_packet_id();
        p41.meta.kind = PacketKind::data;
        NodeId core = 0;
        for (std::size_t i = 0; i < net.node_count(); ++i)
            if (net.node(NodeId(i)).name == "core") core = NodeId(i);
        net.sim().at(1.0, [&net, core, p41]() { net.originate_control(core, p41); });
        net.run();
        bool mismatch = false;
        for (const auto& r : net.trace())
            if (r.event == TraceEvent::drop && r.reason == DropReason::layering_mismatch)
                mismatch = true;
        expect(mismatch, "proto-41 at the Teredo relay did not drop with layering_mismatch");
    }

    criterion(7, "conservation and reasoned drops", before);
}

}  // namespace

int main() {
    std::printf("acceptance suite (configs: %s)\n", cfg_dir().c_str());

    criterion_1_metric_oracles();
    criterion_2_codec_vectors();
    criterion_3_refresh_cadence();

    MatrixResult matrix = run_matrix();
    criterion_4_ranking(matrix);
    criterion_5_overhead(matrix);
    criterion_6_determinism();
    criterion_7_conservation();

    if (g_failures == 0) {
        std::printf("all acceptance criteria passed\n");
        return 0;
    }
    std::printf("%d acceptance check(s) failed\n", g_failures);
    return 1;
}
