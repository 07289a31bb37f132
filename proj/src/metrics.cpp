#include "swfc/metrics.hpp"

#include <algorithm>
#include <stdexcept>

namespace swfc {

double RunMetrics::drr_recovery_only() const {
    if (transmitted == 0) return 0.0;
    return static_cast<double>(recovered) / transmitted;
}

double RunMetrics::empirical_loss() const {
    if (transmitted == 0) return 0.0;
    return 1.0 - static_cast<double>(delivered_direct) / transmitted;
}

double RunMetrics::latency_p95() const {
    uint64_t total = 0;
    for (const auto& [delay, count] : latency_hist) total += count;
    if (total == 0) return 0.0;
    // Smallest delay covering at least 95% of recoveries.
    uint64_t need = (total * 95 + 99) / 100;
    uint64_t seen = 0;
    for (const auto& [delay, count] : latency_hist) {
        seen += count;
        if (seen >= need) return static_cast<double>(delay);
    }
    return static_cast<double>(latency_hist.rbegin()->first);
}

RunMetrics finalize(const RunLog& log) {
    if (log.transmitted == 0) {
        throw std::invalid_argument("metrics over an empty run are undefined");
    }
    RunMetrics m;
    m.transmitted = log.transmitted;
    m.delivered_direct = log.delivered_direct;
    m.recovered = log.recoveries.size();

    m.drr = static_cast<double>(m.delivered_direct + m.recovered) / m.transmitted;

    double delay_sum = 0.0;
    for (const RecoveryRecord& r : log.recoveries) {
        delay_sum += static_cast<double>(r.delay_packets);
        ++m.latency_hist[r.delay_packets];
    }
    m.latency_mean = log.recoveries.empty() ? 0.0 : delay_sum / log.recoveries.size();

    double pending_sum = 0.0;
    for (const BufferSample& s : log.buffer_samples) {
        pending_sum += static_cast<double>(s.pending);
        m.buffer_max = std::max(m.buffer_max, s.pending);
    }
    m.buffer_mean = log.buffer_samples.empty()
                        ? 0.0
                        : pending_sum / log.buffer_samples.size();
    return m;
}

std::vector<LatencyPoint> normalize_latency(const std::vector<LatencyPoint>& sweep,
                                            bool* degenerate) {
    double best = 0.0;
    for (const LatencyPoint& p : sweep) {
        if (p.value > 0.0 && (best == 0.0 || p.value < best)) best = p.value;
    }
    if (degenerate) *degenerate = best == 0.0;
    if (best == 0.0) return sweep;

    std::vector<LatencyPoint> out;
    out.reserve(sweep.size());
    for (const LatencyPoint& p : sweep) {
        out.push_back({p.axis, p.value / best});
    }
    return out;
}

}  // namespace swfc
