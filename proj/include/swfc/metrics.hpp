#pragma once

#include <cstdint>
#include <map>
#include <vector>

namespace swfc {

struct RecoveryRecord {
    uint64_t symbol = 0;
    uint64_t delay_packets = 0;
};

// (pending unknowns, live matrix columns) after one packet ingest.
struct BufferSample {
    uint64_t pending = 0;
    uint64_t columns = 0;
};

// Raw per-run event log; counts are in data symbols unless named otherwise.
struct RunLog {
    uint64_t transmitted = 0;
    uint64_t delivered_direct = 0;
    uint64_t packets_sent = 0;
    uint64_t packets_lost = 0;
    std::vector<RecoveryRecord> recoveries;
    std::vector<BufferSample> buffer_samples;
};

struct RunMetrics {
    uint64_t transmitted = 0;
    uint64_t delivered_direct = 0;
    uint64_t recovered = 0;
    // Fraction of transmitted data symbols eventually available at the sink,
    // direct deliveries plus decoder recoveries.
    double drr = 0.0;
    // Delay statistics cover recovered symbols only, in packets since the
    // symbol's own packet; direct deliveries contribute no delay.
    double latency_mean = 0.0;
    std::map<uint64_t, uint64_t> latency_hist;
    double buffer_mean = 0.0;
    uint64_t buffer_max = 0;

    double drr_recovery_only() const;
    double latency_p95() const;
    double empirical_loss() const;

    bool operator==(const RunMetrics&) const = default;
};

// Throws std::invalid_argument when the log covers no transmissions.
RunMetrics finalize(const RunLog& log);

// One point of a latency sweep before or after normalization.
struct LatencyPoint {
    double axis = 0.0;
    double value = 0.0;
};

// Divides every mean by the smallest positive mean in the sweep so curves
// with different absolute scales compare by shape. When no positive mean
// exists the values pass through and *degenerate is set.
std::vector<LatencyPoint> normalize_latency(const std::vector<LatencyPoint>& sweep,
                                            bool* degenerate = nullptr);

}  // namespace swfc
