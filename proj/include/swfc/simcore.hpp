#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "swfc/channel.hpp"
#include "swfc/codec.hpp"
#include "swfc/decoder.hpp"
#include "swfc/metrics.hpp"

namespace swfc {

// Everything one run needs. A (spec, seed) pair fully determines the packet
// stream, the loss pattern and therefore every metric; codec, channel and
// payload substreams are derived from the run seed with fixed tags so they
// never collide and stay aligned across sweep points.
struct ExperimentSpec {
    CodecConfig codec;
    ChannelConfig channel;
    DecoderVariant decoder = DecoderVariant::GaussianElimination;
    uint64_t d_max_packets = 0;
    // When set, codec.degree is re-derived as density * window whenever the
    // window changes (sweeps over the window keep the density, not the count).
    std::optional<double> parity_density;
    uint64_t run_packets = 100000;
    std::vector<uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    // Drop the first window of packets from the counts so steady-state rates
    // are not diluted by the startup ramp.
    bool exclude_warmup = false;

    void validate() const;
    DecoderConfig decoder_config() const;
};

struct RunOutput {
    RunMetrics metrics;
    RunLog log;
};

// Runs one stream end to end. Every recovery is checked bit-for-bit against
// the transmitted symbol; a mismatch throws std::logic_error.
RunOutput run_once(const ExperimentSpec& spec, uint64_t seed);
RunMetrics run_metrics(const ExperimentSpec& spec, uint64_t seed);

// As run_once, and appends every packet outcome to `trace_out`.
RunOutput run_once_traced(const ExperimentSpec& spec, uint64_t seed,
                          std::vector<uint8_t>& trace_out);

// The codec configuration a trace from run_once_traced(spec, seed) was
// encoded under: the spec's resolved codec with the run-derived encoder
// seed. Build replay decoders over this, not over spec.codec.
CodecConfig trace_codec(const ExperimentSpec& spec, uint64_t seed);

struct Aggregate {
    double mean = 0.0;
    double stderr_of_mean = 0.0;
};

Aggregate aggregate(const std::vector<double>& values);

struct SweepPointResult {
    double axis_value = 0.0;
    ExperimentSpec spec;  // the base spec with the axis applied
    std::vector<RunMetrics> per_seed;  // ordered as spec.seeds
    Aggregate drr;
    Aggregate drr_recovery_only;
    Aggregate latency_mean;
    Aggregate latency_p95;
    Aggregate buffer_mean;
    Aggregate buffer_max;
};

struct SweepResult {
    std::string axis;
    std::vector<SweepPointResult> points;
};

// Returns a copy of `spec` with the named parameter set. Axis names use the
// experiment-file vocabulary: loss_prob, window_symbols, parity_density,
// degree_symbols, code_rate, d_max_packets, devices, slots, run_packets.
// Throws std::invalid_argument for unknown names or values the spec rejects.
ExperimentSpec apply_axis(const ExperimentSpec& spec, const std::string& axis, double value);

// Runs |values| x |seeds| independent runs, at most `threads` at a time, and
// aggregates per point. Results are ordered by `values` then by seed, so the
// output is identical for any thread count.
SweepResult sweep(const ExperimentSpec& base, const std::string& axis,
                  const std::vector<double>& values, unsigned threads = 1);

// A degenerate one-point sweep used by the plain simulate path.
SweepResult single_point(const ExperimentSpec& spec, unsigned threads = 1);

}  // namespace swfc
