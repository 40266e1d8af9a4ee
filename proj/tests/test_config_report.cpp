#include <doctest.h>

#include "tunsim/config.hpp"
#include "tunsim/report.hpp"
#include "tunsim/runner.hpp"
#include "tunsim/scenario.hpp"

using namespace tunsim;

namespace {

const char* kScenarioText = R"(
[scenario]
name = demo
protocol = isatap
replications = 3
seed = 11

[timeline]
setup_at_ms = 100
dns_query_at_ms = 200

[flow.stream]
kind = udp_stream
rate_pps = 10
duration_s = 2
start_ms = 500
)";

MetricsSummary sample(const std::string& proto, double scale) {
    MetricsSummary s;
    s.protocol = proto;
    s.throughput_pps = 40.0 / scale;
    s.throughput_kbps = s.throughput_pps * 12.0;
    s.e2ed_mean_ms = 1.0 * scale;
    s.jitter_mean_ms = 0.02 * scale;
    s.jitter_variance = 1e-5 * scale;
    s.jitter_stddev = 3e-3 * scale;
    s.rtt_mean_ms = 0.6 * scale;
    s.tunnel_setup_delay_ms = 2.0 * scale;
    s.query_delay_ms = 2.01 * scale;
    s.aux.count = 1;
    s.aux.names = {"Auxiliary"};
    return s;
}

}  // namespace

TEST_SUITE("config") {
    TEST_CASE("sections, comments, and typed getters") {
        ConfigFile cfg = ConfigFile::parse_string("[a]\nx = 1 # trailing\ny = 2.5\nz = hello\n"
                                                  "flag = true\n[b.c]\nk = v\n");
        CHECK(cfg.get_int("a", "x") == 1);
        CHECK(cfg.get_double("a", "y") == doctest::Approx(2.5));
        CHECK(cfg.get_string("a", "z") == "hello");
        CHECK(cfg.get_bool("a", "flag", false));
        CHECK(cfg.has_section("b.c"));
        CHECK(cfg.get_string("b.c", "k") == "v");
        CHECK(cfg.get_string("a", "missing", "dflt") == "dflt");
    }

    TEST_CASE("diagnostics carry origin and line") {
        try {
            ConfigFile::parse_string("[a]\nbroken line without equals\n", "demo.cfg");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("demo.cfg:2") != std::string::npos);
        }
        ConfigFile cfg = ConfigFile::parse_string("[a]\nx = nonnumeric\n", "demo.cfg");
        try {
            cfg.get_int("a", "x");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        }
    }

    TEST_CASE("overrides append and win") {
        ConfigFile cfg = ConfigFile::parse_string("[scenario]\nseed = 1\n");
        cfg.apply_override("scenario.seed=99");
        CHECK(cfg.get_int("scenario", "seed") == 99);
        cfg.apply_override("fresh.key=2");
        CHECK(cfg.get_int("fresh", "key") == 2);
        CHECK_THROWS_AS(cfg.apply_override("nodots=1"), ConfigError);
    }

    TEST_CASE("content hash is stable and value-sensitive") {
        ConfigFile a = ConfigFile::parse_string("[s]\nk = 1\n");
        ConfigFile b = ConfigFile::parse_string("[s]\nk = 1\n");
        ConfigFile c = ConfigFile::parse_string("[s]\nk = 2\n");
        CHECK(a.content_hash() == b.content_hash());
        CHECK(a.content_hash() != c.content_hash());
    }

    TEST_CASE("scenario loading picks up flows and timeline") {
        ScenarioConfig s = ScenarioConfig::load(ConfigFile::parse_string(kScenarioText));
        CHECK(s.name == "demo");
        CHECK(s.protocol == ScenarioProtocol::isatap);
        CHECK(s.replications == 3);
        CHECK(s.base_seed == 11);
        REQUIRE(s.flows.size() == 1);
        CHECK(s.flows[0].kind == FlowKind::udp_stream);
        CHECK(s.flows[0].rate_pps == doctest::Approx(10.0));
        CHECK_NOTHROW(s.validate());
    }

    TEST_CASE("validation rejects bad replication counts and early flows") {
        ScenarioConfig s = ScenarioConfig::load(ConfigFile::parse_string(kScenarioText));
        s.replications = 0;
        CHECK_THROWS_AS(s.validate(), ConfigError);
        s.replications = 1;
        s.flows[0].start_ms = 50.0;  // before setup_at_ms
        CHECK_THROWS_AS(s.validate(), ConfigError);
    }

    TEST_CASE("calibration rejects negative link parameters") {
        CHECK_THROWS_AS(CalibrationProfile::load(
                            ConfigFile::parse_string("[links]\ndelay_ms = -1\n")),
                        ConfigError);
        CHECK_THROWS_AS(CalibrationProfile::load(ConfigFile::parse_string(
                            "[links]\nrate_bits_per_ms = -5\n")),
                        ConfigError);
    }

    TEST_CASE("audio and video presets set the stream rate") {
        ConfigFile cfg = ConfigFile::parse_string(
            "[scenario]\nname = x\nprotocol = baseline\n"
            "[flow.a]\nkind = udp_stream\npreset = audio\nduration_s = 1\nstart_ms = 1\n"
            "[flow.v]\nkind = udp_stream\npreset = video\nduration_s = 1\nstart_ms = 1\n");
        ScenarioConfig s = ScenarioConfig::load(cfg);
        REQUIRE(s.flows.size() == 2);
        CHECK(s.flows[0].rate_pps == doctest::Approx(40.0));
        CHECK(s.flows[1].rate_pps == doctest::Approx(200.0));
    }
}

TEST_SUITE("summary csv") {
    TEST_CASE("summaries survive a serialize/parse round trip") {
        MetricsSummary s = sample("isatap", 1.0);
        s.aux.count = 0;
        s.aux.names.clear();
        s.config_hash = 0xabcdef12345678ull;
        s.base_seed = 42;
        std::string csv = summary_to_csv({s}, s.config_hash, s.base_seed);
        auto rows = summaries_from_csv(csv);
        REQUIRE(rows.size() == 1);
        CHECK(rows[0].protocol == "isatap");
        CHECK(rows[0].rtt_mean_ms == doctest::Approx(s.rtt_mean_ms));
        CHECK(rows[0].aux.count == 0);
        CHECK(rows[0].config_hash == s.config_hash);
        CHECK(rows[0].base_seed == 42);
        CHECK_FALSE(rows[0].tunneling_overhead_ms.has_value());
        CHECK(csv.rfind("protocol,", 0) == 0);  // header row mandatory
    }

    TEST_CASE("averaging is the arithmetic mean per metric") {
        MetricsSummary a = sample("isatap", 1.0);
        MetricsSummary b = sample("isatap", 3.0);
        MetricsSummary avg = average_summaries({a, b});
        CHECK(avg.e2ed_mean_ms == doctest::Approx(2.0));
        CHECK(avg.rtt_mean_ms == doctest::Approx(1.2));
        CHECK(avg.aux.count == 1);
    }
}

TEST_SUITE("ranking") {
    TEST_CASE("identical summaries tie everywhere") {
        auto r = build_comparison({sample("6to4", 1.0), sample("teredo", 1.0),
                                   sample("isatap", 1.0)},
                                  std::nullopt);
        for (const auto& param : r.parameters)
            for (int rank : param.ranks) CHECK(rank == 1);
    }

    TEST_CASE("lower is better for delays, higher for throughput") {
        auto r = build_comparison({sample("6to4", 2.0), sample("teredo", 3.0),
                                   sample("isatap", 1.0)},
                                  std::nullopt);
        for (const auto& param : r.parameters) {
            if (param.parameter == "aux_devices") continue;  // all equal here
            CHECK(param.rank_of("isatap") == 1);
            CHECK(param.rank_of("6to4") == 2);
            CHECK(param.rank_of("teredo") == 3);
        }
    }

    TEST_CASE("rank stability under positive scaling of one metric") {
        auto base = build_comparison({sample("6to4", 2.0), sample("teredo", 3.0),
                                      sample("isatap", 1.0)},
                                     std::nullopt);
        auto a = sample("6to4", 2.0);
        auto b = sample("teredo", 3.0);
        auto c = sample("isatap", 1.0);
        for (auto* s : {&a, &b, &c}) s->rtt_mean_ms *= 1000.0;
        auto scaled = build_comparison({a, b, c}, std::nullopt);
        for (std::size_t i = 0; i < base.parameters.size(); ++i)
            CHECK(base.parameters[i].ranks == scaled.parameters[i].ranks);
    }

    TEST_CASE("a comparison needs all three tunneling protocols") {
        auto missing = missing_protocols({sample("6to4", 1.0), sample("isatap", 1.0)});
        CHECK(missing == std::vector<std::string>{"teredo"});
        CHECK(missing_protocols({sample("6to4", 1.0), sample("teredo", 1.0),
                                 sample("isatap", 1.0)})
                  .empty());
    }

    TEST_CASE("missing baseline omits overhead with a warning") {
        auto r = build_comparison({sample("6to4", 1.0)}, std::nullopt);
        for (const auto& param : r.parameters) CHECK(param.parameter != "tunneling_overhead_ms");
        REQUIRE(!r.warnings.empty());
        CHECK(r.warnings[0].find("baseline") != std::string::npos);
        CHECK(r.parameters.size() == 7);
    }

    TEST_CASE("negative overhead warns but is not clipped") {
        MetricsSummary fast = sample("isatap", 1.0);
        MetricsSummary base = sample("baseline", 1.0);
        base.rtt_mean_ms = fast.rtt_mean_ms + 1.0;
        auto r = build_comparison({fast}, base);
        bool warned = false;
        for (const auto& w : r.warnings)
            if (w.find("negative") != std::string::npos) warned = true;
        CHECK(warned);
        for (const auto& param : r.parameters)
            if (param.parameter == "tunneling_overhead_ms") CHECK(param.values[0] < 0.0);
    }

    TEST_CASE("aux devices rank 0 ahead of 1 with an explicit tie") {
        auto a = sample("6to4", 1.0);
        auto b = sample("teredo", 1.0);
        auto c = sample("isatap", 1.0);
        c.aux.count = 0;
        auto r = build_comparison({a, b, c}, std::nullopt);
        for (const auto& param : r.parameters) {
            if (param.parameter != "aux_devices") continue;
            CHECK(param.rank_of("isatap") == 1);
            CHECK(param.rank_of("6to4") == 2);
            CHECK(param.rank_of("teredo") == 2);
            CHECK(param.tied("6to4", "teredo"));
        }
    }
}
