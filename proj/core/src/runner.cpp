#include "tunsim/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tunsim/trace.hpp"

namespace tunsim {

namespace {

struct ControlDelays {
    double setup_ms = 0.0;
    double query_ms = 0.0;
};

ControlDelays extract_control_delays(const Trace& trace, NodeId client) {
    ControlDelays d;
    double setup_first = -1.0, setup_last = -1.0;
    double query_at = -1.0, reply_at = -1.0;
    for (const TraceRecord& r : trace) {
        if (r.event == TraceEvent::setup_msg) {
            if (setup_first < 0.0) setup_first = r.time_ms;
            setup_last = r.time_ms;
        } else if (r.event == TraceEvent::dns_query && r.node == client) {
            if (query_at < 0.0) query_at = r.time_ms;
        } else if (r.event == TraceEvent::dns_reply && r.node == client) {
            reply_at = r.time_ms;
        }
    }
    if (setup_first >= 0.0) d.setup_ms = setup_last - setup_first;
    if (query_at >= 0.0 && reply_at >= 0.0) d.query_ms = reply_at - query_at;
    return d;
}

void write_file(const std::string& path, const std::string& content,
                std::vector<std::string>& written) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw RunError("cannot write " + path);
    out << content;
    written.push_back(path);
}

std::string fmt_ms(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

std::string fmt_precise(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.8f", v);
    return buf;
}

}  // namespace

MetricsSummary run_single(const ScenarioConfig& scenario, const CalibrationProfile& calib,
                          uint64_t seed, Trace* out_trace,
                          std::vector<std::string>* out_node_names) {
    BuiltTopology built = build_topology(scenario, calib, seed);
    Network& net = built.net;

    const bool tunneled = scenario.protocol != ScenarioProtocol::baseline;
    if (tunneled) {
        net.sim().at(scenario.setup_at_ms, [&net, &built]() {
            net.start_tunnel_setup(built.sender);
        });
    }
    if (scenario.dns_query_at_ms > 0.0) {
        net.sim().at(scenario.dns_query_at_ms, [&net, &built]() {
            net.send_dns_query(built.sender, "receiver.v6.test");
        });
    }
    for (const FlowPlan& plan : built.flows) generate(net, plan);

    net.run(-1.0, scenario.max_events);

    std::vector<FlowLog> logs = collect(net.trace(), built.flows);

    MetricsSummary s;
    s.protocol = to_string(scenario.protocol);
    const FlowLog* stream = nullptr;
    const FlowLog* ping = nullptr;
    for (const FlowLog& log : logs) {
        if (log.kind == FlowKind::udp_stream && !stream) stream = &log;
        if (log.kind == FlowKind::ping && !ping) ping = &log;
    }

    if (stream) {
        s.throughput_pps = throughput_pps(*stream);
        s.throughput_kbps = throughput_kbps(s.throughput_pps);
        E2edResult d = e2ed(*stream);
        s.e2ed_mean_ms = d.mean_ms;
        JitterResult j = jitter(d.delays_ms);
        s.jitter_mean_ms = j.mean_ms;
        if (j.series_ms.size() > 1) {
            std::span<const double> tail(j.series_ms.data() + 1, j.series_ms.size() - 1);
            s.jitter_variance = variance(tail);
            s.jitter_stddev = stddev(tail);
        }
    }
    if (ping) s.rtt_mean_ms = rtt(*ping).mean_ms;

    ControlDelays delays = extract_control_delays(net.trace(), built.sender);
    s.tunnel_setup_delay_ms = delays.setup_ms;
    s.query_delay_ms = delays.query_ms;
    s.aux = count_auxiliary_devices(net);
    s.config_hash = scenario.config_hash;
    s.base_seed = seed;

    if (out_trace) *out_trace = net.trace();
    if (out_node_names) *out_node_names = net.node_names();
    return s;
}

std::string summary_to_csv(const std::vector<MetricsSummary>& rows, uint64_t config_hash,
                           uint64_t base_seed) {
    std::string out =
        "protocol,throughput_pps,throughput_kbps,e2ed_mean_ms,jitter_mean_ms,jitter_variance,"
        "jitter_stddev,rtt_mean_ms,tunneling_overhead_ms,tunnel_setup_delay_ms,query_delay_ms,"
        "aux_device_count,aux_device_names,config_hash,base_seed\n";
    for (const MetricsSummary& s : rows) {
        char hashbuf[32];
        uint64_t hash = s.config_hash ? s.config_hash : config_hash;
        uint64_t seed = s.base_seed ? s.base_seed : base_seed;
        std::snprintf(hashbuf, sizeof hashbuf, "%016llx", static_cast<unsigned long long>(hash));
        std::string names;
        for (std::size_t i = 0; i < s.aux.names.size(); ++i) {
            if (i) names += ";";
            names += s.aux.names[i];
        }
        if (names.empty()) names = "none";
        out += s.protocol + ",";
        out += fmt_precise(s.throughput_pps) + ",";
        out += fmt_precise(s.throughput_kbps) + ",";
        out += fmt_ms(s.e2ed_mean_ms) + ",";
        out += fmt_ms(s.jitter_mean_ms) + ",";
        char var[48];
        std::snprintf(var, sizeof var, "%.12g", s.jitter_variance);
        out += std::string(var) + ",";
        std::snprintf(var, sizeof var, "%.12g", s.jitter_stddev);
        out += std::string(var) + ",";
        out += fmt_ms(s.rtt_mean_ms) + ",";
        out += (s.tunneling_overhead_ms ? fmt_ms(*s.tunneling_overhead_ms) : std::string("nan")) + ",";
        out += fmt_ms(s.tunnel_setup_delay_ms) + ",";
        out += fmt_ms(s.query_delay_ms) + ",";
        out += std::to_string(s.aux.count) + ",";
        out += names + ",";
        out += std::string(hashbuf) + ",";
        out += std::to_string(seed) + "\n";
    }
    return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

}  // namespace

std::vector<MetricsSummary> summaries_from_csv(const std::string& text) {
    std::vector<MetricsSummary> rows;
    std::istringstream in(text);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (header) {
            header = false;
            if (line.rfind("protocol,", 0) != 0)
                throw RunError("summary CSV missing header row");
            continue;
        }
        auto f = split_csv_line(line);
        if (f.size() < 13) throw RunError("summary CSV row too short: " + line);
        MetricsSummary s;
        s.protocol = f[0];
        s.throughput_pps = std::stod(f[1]);
        s.throughput_kbps = std::stod(f[2]);
        s.e2ed_mean_ms = std::stod(f[3]);
        s.jitter_mean_ms = std::stod(f[4]);
        s.jitter_variance = std::stod(f[5]);
        s.jitter_stddev = std::stod(f[6]);
        s.rtt_mean_ms = std::stod(f[7]);
        if (f[8] != "nan") s.tunneling_overhead_ms = std::stod(f[8]);
        s.tunnel_setup_delay_ms = std::stod(f[9]);
        s.query_delay_ms = std::stod(f[10]);
        s.aux.count = uint32_t(std::stoul(f[11]));
        if (f.size() >= 15) {
            s.config_hash = std::stoull(f[13], nullptr, 16);
            s.base_seed = std::stoull(f[14]);
        }
        if (f[12] != "none") {
            std::string cur;
            for (char c : f[12]) {
                if (c == ';') {
                    s.aux.names.push_back(cur);
                    cur.clear();
                } else {
                    cur += c;
                }
            }
            if (!cur.empty()) s.aux.names.push_back(cur);
        }
        rows.push_back(std::move(s));
    }
    return rows;
}

RunArtifacts cmd_run(const ScenarioConfig& scenario, const CalibrationProfile& calib,
                     const RunOptions& opts) {
    scenario.validate();
    RunArtifacts art;

    const bool writing = !opts.out_dir.empty();
    if (writing) std::filesystem::create_directories(opts.out_dir);

    for (uint32_t rep = 0; rep < scenario.replications; ++rep) {
        uint64_t seed = scenario.base_seed + rep;
        Trace trace;
        std::vector<std::string> names;
        MetricsSummary s = run_single(scenario, calib, seed,
                                      writing ? &trace : nullptr,
                                      writing ? &names : nullptr);
        art.per_rep.push_back(s);
        if (writing) {
            std::string stem = opts.out_dir + "/" + scenario.name + "_rep" + std::to_string(rep);
            write_file(stem + "_trace.csv", trace_to_csv(trace, names), art.files_written);
            write_file(stem + "_metrics.csv",
                       summary_to_csv({s}, scenario.config_hash, seed), art.files_written);
        }
    }

    art.averaged = average_summaries(art.per_rep);
    art.averaged.base_seed = scenario.base_seed;
    if (writing) {
        write_file(opts.out_dir + "/" + scenario.name + "_summary.csv",
                   summary_to_csv({art.averaged}, scenario.config_hash, scenario.base_seed),
                   art.files_written);
    }
    return art;
}

}  // namespace tunsim
