#include "tunsim/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace tunsim {

namespace {

constexpr double kTieRelEps = 1e-9;

bool nearly_equal(double a, double b) {
    double scale = std::max(std::fabs(a), std::fabs(b));
    return std::fabs(a - b) <= kTieRelEps * std::max(scale, 1e-30);
}

std::vector<int> competition_ranks(const std::vector<double>& values, bool higher_is_better) {
    std::vector<int> ranks(values.size(), 1);
    for (std::size_t i = 0; i < values.size(); ++i) {
        int better = 0;
        for (std::size_t j = 0; j < values.size(); ++j) {
            if (i == j || nearly_equal(values[i], values[j])) continue;
            bool j_better = higher_is_better ? values[j] > values[i] : values[j] < values[i];
            if (j_better) ++better;
        }
        ranks[i] = better + 1;
    }
    return ranks;
}

std::string fmt_value(const std::string& parameter, double v) {
    char buf[48];
    if (parameter == "throughput_kbps")
        std::snprintf(buf, sizeof buf, "%.6f", v);
    else if (parameter == "aux_devices")
        std::snprintf(buf, sizeof buf, "%.0f", v);
    else
        std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

}  // namespace

std::vector<std::string> missing_protocols(const std::vector<MetricsSummary>& summaries) {
    std::vector<std::string> missing;
    for (const char* name : {"6to4", "teredo", "isatap"}) {
        bool found = false;
        for (const auto& s : summaries)
            if (s.protocol == name) found = true;
        if (!found) missing.push_back(name);
    }
    return missing;
}

int RankedParameter::rank_of(const std::string& protocol) const {
    for (std::size_t i = 0; i < protocols.size(); ++i)
        if (protocols[i] == protocol) return ranks[i];
    return 0;
}

bool RankedParameter::tied(const std::string& a, const std::string& b) const {
    int ra = 0, rb = 0;
    for (std::size_t i = 0; i < protocols.size(); ++i) {
        if (protocols[i] == a) ra = ranks[i];
        if (protocols[i] == b) rb = ranks[i];
    }
    return ra != 0 && ra == rb;
}

ComparisonReport build_comparison(std::vector<MetricsSummary> summaries,
                                  const std::optional<MetricsSummary>& baseline) {
    if (summaries.empty()) throw ReportError("no summaries to compare");

    ComparisonReport report;
    for (const auto& s : summaries) {
        report.protocols.push_back(s.protocol);
        report.config_hash ^= s.config_hash;
    }
    report.base_seed = summaries.front().base_seed;
    if (baseline) report.config_hash ^= baseline->config_hash;

    if (baseline) {
        for (auto& s : summaries) {
            double overhead = tunneling_overhead(s.rtt_mean_ms, baseline->rtt_mean_ms);
            if (overhead < 0.0)
                report.warnings.push_back("calibration inconsistency: negative tunneling overhead for " +
                                          s.protocol);
            s.tunneling_overhead_ms = overhead;
        }
    } else {
        report.warnings.push_back("no baseline summary: tunneling overhead omitted");
    }

    struct ParamDef {
        const char* name;
        bool higher_is_better;
        bool needs_baseline;
        double (*get)(const MetricsSummary&);
    };
    static const ParamDef defs[] = {
        {"throughput_kbps", true, false, [](const MetricsSummary& s) { return s.throughput_kbps; }},
        {"e2ed_ms", false, false, [](const MetricsSummary& s) { return s.e2ed_mean_ms; }},
        {"jitter_ms", false, false, [](const MetricsSummary& s) { return s.jitter_mean_ms; }},
        {"rtt_ms", false, false, [](const MetricsSummary& s) { return s.rtt_mean_ms; }},
        {"tunneling_overhead_ms", false, true,
         [](const MetricsSummary& s) { return s.tunneling_overhead_ms.value_or(0.0); }},
        {"tunnel_setup_delay_ms", false, false,
         [](const MetricsSummary& s) { return s.tunnel_setup_delay_ms; }},
        {"query_delay_ms", false, false, [](const MetricsSummary& s) { return s.query_delay_ms; }},
        {"aux_devices", false, false, [](const MetricsSummary& s) { return double(s.aux.count); }},
    };

    for (const ParamDef& def : defs) {
        if (def.needs_baseline && !baseline) continue;
        RankedParameter param;
        param.parameter = def.name;
        param.higher_is_better = def.higher_is_better;
        for (const auto& s : summaries) {
            param.protocols.push_back(s.protocol);
            param.values.push_back(def.get(s));
        }
        param.ranks = competition_ranks(param.values, def.higher_is_better);
        report.parameters.push_back(std::move(param));
    }
    return report;
}

std::string comparison_to_csv(const ComparisonReport& report) {
    std::string out = "parameter,protocol,value,rank\n";
    for (const auto& p : report.parameters) {
        for (std::size_t i = 0; i < p.protocols.size(); ++i) {
            out += p.parameter + "," + p.protocols[i] + "," + fmt_value(p.parameter, p.values[i]) +
                   "," + std::to_string(p.ranks[i]) + "\n";
        }
    }
    return out;
}

std::string comparison_to_table(const ComparisonReport& report) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "config %016llx seed %llu\n",
                  static_cast<unsigned long long>(report.config_hash),
                  static_cast<unsigned long long>(report.base_seed));
    std::string out = "Overall standing per parameter (rank 1 = comparatively best)\n";
    out += buf;

    std::snprintf(buf, sizeof buf, "%-24s", "parameter");
    out += buf;
    for (const auto& proto : report.protocols) {
        std::snprintf(buf, sizeof buf, " %20s", proto.c_str());
        out += buf;
    }
    out += "\n";
    out += std::string(24 + 21 * report.protocols.size(), '-') + "\n";

    for (const auto& p : report.parameters) {
        std::snprintf(buf, sizeof buf, "%-24s", p.parameter.c_str());
        out += buf;
        for (const auto& proto : report.protocols) {
            for (std::size_t i = 0; i < p.protocols.size(); ++i) {
                if (p.protocols[i] != proto) continue;
                bool tie = false;
                for (std::size_t j = 0; j < p.protocols.size(); ++j)
                    if (j != i && p.ranks[j] == p.ranks[i]) tie = true;
                std::string cell = fmt_value(p.parameter, p.values[i]) + " (" +
                                   std::to_string(p.ranks[i]) + (tie ? "=" : "") + ")";
                std::snprintf(buf, sizeof buf, " %20s", cell.c_str());
                out += buf;
            }
        }
        out += "\n";
    }
    for (const auto& w : report.warnings) out += "warning: " + w + "\n";
    return out;
}

}  // namespace tunsim
