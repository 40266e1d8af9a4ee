#include "tunsim/metrics.hpp"

#include <cmath>

namespace tunsim {

double throughput_pps(const FlowLog& log) {
    if (log.samples.empty()) throw MetricError("throughput: empty flow log");
    double first_send = log.samples.front().ts_ms;
    double last_receive = -1.0;
    std::size_t received = 0;
    for (const auto& s : log.samples) {
        if (s.tr_ms) {
            ++received;
            if (*s.tr_ms > last_receive) last_receive = *s.tr_ms;
        }
    }
    if (received == 0) throw MetricError("throughput: no packets received");
    double span_s = (last_receive - first_send) / 1000.0;
    if (span_s <= 0.0) throw MetricError("throughput: zero observation span");
    return double(received) / span_s;
}

double throughput_kbps(double pps) {
    return pps * (1500.0 * 8.0 / 1000.0);  // folds to * 12, keeping the identity exact
}

E2edResult e2ed(const FlowLog& log) {
    E2edResult r;
    double sum = 0.0;
    for (const auto& s : log.samples) {
        if (!s.tr_ms) continue;  // missing packets are excluded
        double d = *s.tr_ms - s.ts_ms;
        r.delays_ms.push_back(d);
        sum += d;
    }
    r.mean_ms = r.delays_ms.empty() ? 0.0 : sum / double(r.delays_ms.size());
    return r;
}

JitterResult jitter(std::span<const double> delays_ms) {
    JitterResult r;
    if (delays_ms.empty()) return r;
    r.series_ms.resize(delays_ms.size());
    r.series_ms[0] = 0.0;  // the first packet has no predecessor
    double sum = 0.0;
    for (std::size_t i = 1; i < delays_ms.size(); ++i) {
        double diff = delays_ms[i] - delays_ms[i - 1];
        r.series_ms[i] = std::fabs(diff);
        sum += r.series_ms[i];
        r.telescoped_ms += diff;
    }
    r.mean_ms = delays_ms.size() > 1 ? sum / double(delays_ms.size() - 1) : 0.0;
    return r;
}

double variance(std::span<const double> xs) {
    if (xs.empty()) throw MetricError("variance: empty sample");
    bool constant = true;
    for (double x : xs)
        if (x != xs.front()) constant = false;
    if (constant) return 0.0;  // exact, regardless of the mean's rounding
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= double(xs.size());
    double acc = 0.0;
    for (double x : xs) acc += (x - mean) * (x - mean);
    return acc / double(xs.size());  // population variance
}

double stddev(std::span<const double> xs) {
    return std::sqrt(variance(xs));
}

RttResult rtt(const FlowLog& ping_log) {
    RttResult r;
    double sum = 0.0;
    for (const auto& s : ping_log.samples) {
        if (!s.tr_ms) {
            ++r.unmatched;
            continue;
        }
        sum += *s.tr_ms - s.ts_ms;
        ++r.matched;
    }
    if (r.matched == 0) throw MetricError("rtt: no matched probes");
    r.mean_ms = sum / double(r.matched);
    return r;
}

double tunneling_overhead(double rtt_tunneled_ms, double rtt_untunneled_ms) {
    return rtt_tunneled_ms - rtt_untunneled_ms;
}

MetricsSummary average_summaries(const std::vector<MetricsSummary>& runs) {
    if (runs.empty()) throw MetricError("average: no summaries");
    MetricsSummary avg = runs.front();
    if (runs.size() == 1) return avg;
    auto n = double(runs.size());
    avg.throughput_pps = 0;
    avg.throughput_kbps = 0;
    avg.e2ed_mean_ms = 0;
    avg.jitter_mean_ms = 0;
    avg.jitter_variance = 0;
    avg.jitter_stddev = 0;
    avg.rtt_mean_ms = 0;
    avg.tunnel_setup_delay_ms = 0;
    avg.query_delay_ms = 0;
    bool any_overhead = false;
    double overhead = 0;
    for (const auto& r : runs) {
        avg.throughput_pps += r.throughput_pps / n;
        avg.throughput_kbps += r.throughput_kbps / n;
        avg.e2ed_mean_ms += r.e2ed_mean_ms / n;
        avg.jitter_mean_ms += r.jitter_mean_ms / n;
        avg.jitter_variance += r.jitter_variance / n;
        avg.jitter_stddev += r.jitter_stddev / n;
        avg.rtt_mean_ms += r.rtt_mean_ms / n;
        avg.tunnel_setup_delay_ms += r.tunnel_setup_delay_ms / n;
        avg.query_delay_ms += r.query_delay_ms / n;
        if (r.tunneling_overhead_ms) {
            any_overhead = true;
            overhead += *r.tunneling_overhead_ms / n;
        }
    }
    avg.tunneling_overhead_ms = any_overhead ? std::optional<double>(overhead) : std::nullopt;
    return avg;
}

}  // namespace tunsim
