// tunsim: scenario runner and comparison report generator.
//
// Subcommands:
//   run      execute a scenario's seeded replications, write traces and
//            metric summaries
//   compare  rank protocol summaries across all parameters
//   report   render a comparison of summaries as csv or table

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "tunsim/config.hpp"
#include "tunsim/report.hpp"
#include "tunsim/runner.hpp"
#include "tunsim/scenario.hpp"

namespace {

namespace fs = std::filesystem;
using namespace tunsim;

std::string default_out_dir() {
    const char* env = std::getenv("TUNSIM_OUT_DIR");
    return env ? env : "out";
}

std::string config_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    const char* env = std::getenv("TUNSIM_CONFIG_DIR");
    if (env) return env;
    return "configs";
}

std::string resolve_scenario_path(const std::string& name_or_path, const std::string& cfg_dir) {
    if (fs::exists(name_or_path)) return name_or_path;
    std::string candidate = cfg_dir + "/" + name_or_path + ".cfg";
    if (fs::exists(candidate)) return candidate;
    throw ConfigError("scenario not found: " + name_or_path + " (also tried " + candidate + ")");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct LoadedSummaries {
    std::vector<MetricsSummary> tunneled;
    std::optional<MetricsSummary> baseline;
};

LoadedSummaries load_summaries(const std::vector<std::string>& files, const std::string& baseline_file) {
    LoadedSummaries out;
    for (const auto& f : files) {
        for (auto& s : summaries_from_csv(read_file(f))) {
            if (s.protocol == "baseline")
                out.baseline = s;
            else
                out.tunneled.push_back(std::move(s));
        }
    }
    if (!baseline_file.empty()) {
        auto rows = summaries_from_csv(read_file(baseline_file));
        if (rows.empty()) throw ReportError("baseline file has no rows: " + baseline_file);
        out.baseline = rows.front();
    }
    return out;
}

int do_run(const std::string& scenario_arg, const std::string& cfg_dir_flag, int reps, int64_t seed,
           const std::string& out_dir, const std::vector<std::string>& overrides) {
    std::string cfg_dir = config_dir(cfg_dir_flag);
    std::string path = resolve_scenario_path(scenario_arg, cfg_dir);
    ConfigFile cfg = ConfigFile::parse_file(path);
    for (const auto& ov : overrides) cfg.apply_override(ov);

    ScenarioConfig scenario = ScenarioConfig::load(cfg);
    if (reps > 0) scenario.replications = uint32_t(reps);
    if (seed >= 0) scenario.base_seed = uint64_t(seed);
    scenario.validate();

    std::string calib_path = cfg_dir + "/" + scenario.calibration + ".cfg";
    CalibrationProfile calib = CalibrationProfile::load(ConfigFile::parse_file(calib_path));

    RunOptions opts;
    opts.out_dir = out_dir;
    RunArtifacts art = cmd_run(scenario, calib, opts);

    std::cout << "scenario " << scenario.name << ": " << scenario.replications
              << " replication(s), base seed " << scenario.base_seed << "\n";
    std::cout << summary_to_csv({art.averaged}, scenario.config_hash, scenario.base_seed);
    for (const auto& f : art.files_written) std::cout << "wrote " << f << "\n";
    return 0;
}

int do_compare(const std::vector<std::string>& files, const std::string& baseline_file,
               const std::string& out_dir) {
    LoadedSummaries in = load_summaries(files, baseline_file);
    auto missing = missing_protocols(in.tunneled);
    if (!missing.empty()) {
        std::string all;
        for (const auto& m : missing) all += (all.empty() ? "" : ", ") + m;
        throw ReportError("missing summary for: " + all);
    }

    ComparisonReport report = build_comparison(in.tunneled, in.baseline);
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";

    std::cout << comparison_to_table(report);
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        std::string path = out_dir + "/comparison.csv";
        std::ofstream out(path, std::ios::binary);
        out << comparison_to_csv(report);
        std::cout << "wrote " << path << "\n";
    }
    return 0;
}

int do_report(const std::string& format, const std::vector<std::string>& files,
              const std::string& baseline_file) {
    LoadedSummaries in = load_summaries(files, baseline_file);
    if (in.tunneled.empty()) throw ReportError("no tunneled protocol summaries given");
    ComparisonReport report = build_comparison(in.tunneled, in.baseline);
    if (format == "csv")
        std::cout << comparison_to_csv(report);
    else
        std::cout << comparison_to_table(report);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"IPv6 transition tunneling simulator"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run a scenario's replications");
    std::string scenario_arg, cfg_dir_flag, out_dir = default_out_dir();
    int reps = -1;
    int64_t seed = -1;
    std::vector<std::string> overrides;
    run->add_option("--scenario", scenario_arg, "Scenario name or config path")->required();
    run->add_option("--config-dir", cfg_dir_flag, "Directory with scenario/calibration configs");
    run->add_option("--reps", reps, "Override replication count");
    run->add_option("--seed", seed, "Override base seed");
    run->add_option("--out", out_dir, "Output directory (env TUNSIM_OUT_DIR)");
    run->add_option("--set", overrides, "Config override section.key=value")->take_all();

    auto* compare = app.add_subcommand("compare", "Rank protocol summaries");
    std::vector<std::string> summary_files;
    std::string baseline_file, compare_out = default_out_dir();
    compare->add_option("--summaries", summary_files, "Summary CSV files")->required()->take_all();
    compare->add_option("--baseline", baseline_file, "Baseline (untunneled) summary CSV");
    compare->add_option("--out", compare_out, "Output directory for comparison.csv");

    auto* report = app.add_subcommand("report", "Render a comparison of summaries");
    std::string format = "table";
    std::vector<std::string> report_files;
    std::string report_baseline;
    report->add_option("--format", format, "csv or table")->check(CLI::IsMember({"csv", "table"}));
    report->add_option("--summaries", report_files, "Summary CSV files")->required()->take_all();
    report->add_option("--baseline", report_baseline, "Baseline summary CSV");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return do_run(scenario_arg, cfg_dir_flag, reps, seed, out_dir, overrides);
        if (compare->parsed()) return do_compare(summary_files, baseline_file, compare_out);
        if (report->parsed()) return do_report(format, report_files, report_baseline);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
