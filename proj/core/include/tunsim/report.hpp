#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tunsim/metrics.hpp"

namespace tunsim {

struct ReportError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One comparison parameter: per-protocol values and competition ranks
// (ties share a rank; the next rank is skipped).
struct RankedParameter {
    std::string parameter;
    bool higher_is_better = false;
    std::vector<std::string> protocols;
    std::vector<double> values;
    std::vector<int> ranks;

    int rank_of(const std::string& protocol) const;
    bool tied(const std::string& a, const std::string& b) const;
};

struct ComparisonReport {
    std::vector<RankedParameter> parameters;
    std::vector<std::string> protocols;
    std::vector<std::string> warnings;
    uint64_t config_hash = 0;
    uint64_t base_seed = 0;
};

// Ranks the eight parameters across the tunneled summaries. The baseline
// supplies the untunneled RTT for the overhead column; without it the
// overhead parameter is omitted with a warning.
ComparisonReport build_comparison(std::vector<MetricsSummary> summaries,
                                  const std::optional<MetricsSummary>& baseline);

// Which of the three tunneling protocols have no summary yet. A full
// comparison requires all of them.
std::vector<std::string> missing_protocols(const std::vector<MetricsSummary>& summaries);

std::string comparison_to_csv(const ComparisonReport& report);
std::string comparison_to_table(const ComparisonReport& report);

}  // namespace tunsim
