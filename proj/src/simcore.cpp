#include "swfc/simcore.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace swfc {

namespace {

// Substream tags; any fixed distinct values work, they only have to keep the
// codec, channel and payload draws from colliding.
constexpr uint64_t kTagCodec = 0x11;
constexpr uint64_t kTagChannel = 0x22;
constexpr uint64_t kTagPayload = 0x33;

CodecConfig resolved_codec(const ExperimentSpec& spec) {
    CodecConfig cc = spec.codec;
    if (spec.parity_density) {
        cc.degree = CodecConfig::degree_from_density(*spec.parity_density,
                                                     cc.window_symbols);
    }
    return cc;
}

}  // namespace

void ExperimentSpec::validate() const {
    resolved_codec(*this).validate();
    channel.validate();
    if (decoder == DecoderVariant::TruncatedGe && d_max_packets < 1) {
        throw std::invalid_argument("d_max_packets must be >= 1 for truncated decoding");
    }
    if (seeds.empty()) throw std::invalid_argument("at least one seed is required");
    CodecConfig cc = resolved_codec(*this);
    if (run_packets < uint64_t{10} * cc.window_packets()) {
        throw std::invalid_argument(
            "run_packets must cover at least ten windows of packets");
    }
}

DecoderConfig ExperimentSpec::decoder_config() const {
    return DecoderConfig{decoder, d_max_packets, resolved_codec(*this)};
}

CodecConfig trace_codec(const ExperimentSpec& spec, uint64_t seed) {
    CodecConfig cc = resolved_codec(spec);
    cc.seed = seed_mix(seed, kTagCodec);
    return cc;
}

namespace {

RunOutput run_impl(const ExperimentSpec& spec, uint64_t seed,
                   std::vector<uint8_t>* trace_out) {
    spec.validate();
    CodecConfig cc = resolved_codec(spec);
    cc.seed = seed_mix(seed, kTagCodec);

    Encoder enc(cc);
    Channel chan(spec.channel, seed_mix(seed, kTagChannel));
    Decoder dec(DecoderConfig{spec.decoder, spec.d_max_packets, cc});
    PrngState payload_rng{seed_mix(seed, kTagPayload)};

    const uint32_t l = cc.segments_per_packet;
    const uint64_t warm_packets = spec.exclude_warmup ? cc.window_packets() : 0;

    std::vector<BitBlock> originals;
    originals.reserve(spec.run_packets * l);
    RunLog log;

    std::vector<BitBlock> data(l);
    for (uint64_t n = 0; n < spec.run_packets; ++n) {
        for (uint32_t j = 0; j < l; ++j) {
            data[j] = BitBlock::random(cc.payload_bits, payload_rng);
            originals.push_back(data[j]);
        }
        Packet p = enc.encode_next(data);
        bool ok = chan.transmit();

        if (trace_out) {
            TraceRecord rec;
            rec.delivered = ok;
            rec.seq = n;
            if (ok) rec.packet = p;
            append_trace_record(cc, rec, *trace_out);
        }

        std::vector<RecoveryEvent> events =
            dec.ingest(ok ? PacketOutcome::delivered(std::move(p))
                          : PacketOutcome::lost(n));

        bool counted = n >= warm_packets;
        if (counted) {
            ++log.packets_sent;
            log.transmitted += l;
            if (ok) {
                log.delivered_direct += l;
            } else {
                ++log.packets_lost;
            }
        }
        for (const RecoveryEvent& ev : events) {
            if (ev.value != originals[ev.symbol]) {
                throw std::logic_error("recovered symbol differs from transmitted");
            }
            if (ev.symbol / l >= warm_packets) {
                log.recoveries.push_back({ev.symbol, ev.delay_packets});
            }
        }
        if (counted) {
            log.buffer_samples.push_back(
                {dec.missing().size(), dec.matrix_columns()});
        }
    }

    RunOutput out;
    out.metrics = finalize(log);
    out.log = std::move(log);
    return out;
}

}  // namespace

RunOutput run_once(const ExperimentSpec& spec, uint64_t seed) {
    return run_impl(spec, seed, nullptr);
}

RunMetrics run_metrics(const ExperimentSpec& spec, uint64_t seed) {
    return run_impl(spec, seed, nullptr).metrics;
}

RunOutput run_once_traced(const ExperimentSpec& spec, uint64_t seed,
                          std::vector<uint8_t>& trace_out) {
    return run_impl(spec, seed, &trace_out);
}

Aggregate aggregate(const std::vector<double>& values) {
    Aggregate a;
    if (values.empty()) return a;
    double sum = 0.0;
    for (double v : values) sum += v;
    a.mean = sum / values.size();
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - a.mean) * (v - a.mean);
        double var = ss / (values.size() - 1);
        a.stderr_of_mean = std::sqrt(var / values.size());
    }
    return a;
}

ExperimentSpec apply_axis(const ExperimentSpec& spec, const std::string& axis,
                          double value) {
    ExperimentSpec s = spec;
    auto as_count = [&](const char* what) {
        if (!(value >= 0) || value != std::floor(value)) {
            throw std::invalid_argument(std::string(what) + " must be a whole number");
        }
        return static_cast<uint64_t>(value);
    };

    if (axis == "loss_prob") {
        auto* b = std::get_if<BernoulliChannel>(&s.channel.model);
        if (!b) {
            throw std::invalid_argument("loss_prob sweeps need the bernoulli channel");
        }
        b->loss_prob = value;
    } else if (axis == "window_symbols") {
        s.codec.window_symbols = static_cast<uint32_t>(as_count("window_symbols"));
        if (!s.parity_density) {
            s.codec.degree = std::min(s.codec.degree, s.codec.window_symbols);
        }
    } else if (axis == "parity_density") {
        s.parity_density = value;
    } else if (axis == "degree_symbols") {
        s.codec.degree = static_cast<uint32_t>(as_count("degree_symbols"));
        s.parity_density.reset();
    } else if (axis == "code_rate") {
        if (!(value > 0.0) || value >= 1.0) {
            throw std::invalid_argument("code_rate must be in (0, 1)");
        }
        uint32_t l = s.codec.segments_per_packet;
        double m = std::round(l / value) - l;
        if (m < 1) m = 1;
        s.codec.parities_per_packet = static_cast<uint32_t>(m);
    } else if (axis == "d_max_packets") {
        s.d_max_packets = as_count("d_max_packets");
    } else if (axis == "devices") {
        auto* a = std::get_if<SlottedAlohaChannel>(&s.channel.model);
        if (!a) {
            throw std::invalid_argument("devices sweeps need the slotted_aloha channel");
        }
        a->devices = static_cast<uint32_t>(as_count("devices"));
    } else if (axis == "slots") {
        auto* a = std::get_if<SlottedAlohaChannel>(&s.channel.model);
        if (!a) {
            throw std::invalid_argument("slots sweeps need the slotted_aloha channel");
        }
        a->slots = static_cast<uint32_t>(as_count("slots"));
    } else if (axis == "run_packets") {
        s.run_packets = as_count("run_packets");
    } else {
        throw std::invalid_argument("unknown sweep axis: " + axis);
    }
    s.validate();
    return s;
}

namespace {

SweepResult sweep_impl(std::vector<std::pair<double, ExperimentSpec>> points,
                       const std::string& axis, unsigned threads) {
    SweepResult result;
    result.axis = axis;
    for (auto& [v, s] : points) s.validate();

    struct Task {
        size_t point;
        size_t seed_idx;
    };
    std::vector<Task> tasks;
    for (size_t pi = 0; pi < points.size(); ++pi) {
        for (size_t si = 0; si < points[pi].second.seeds.size(); ++si) {
            tasks.push_back({pi, si});
        }
    }

    std::vector<std::vector<RunMetrics>> grid(points.size());
    for (size_t pi = 0; pi < points.size(); ++pi) {
        grid[pi].resize(points[pi].second.seeds.size());
    }

    auto work = [&](size_t ti) {
        const Task& t = tasks[ti];
        const ExperimentSpec& s = points[t.point].second;
        grid[t.point][t.seed_idx] = run_metrics(s, s.seeds[t.seed_idx]);
    };

    if (threads <= 1 || tasks.size() <= 1) {
        for (size_t i = 0; i < tasks.size(); ++i) work(i);
    } else {
        std::atomic<size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mu;
        unsigned n = std::min<unsigned>(threads, tasks.size());
        std::vector<std::thread> pool;
        pool.reserve(n);
        for (unsigned w = 0; w < n; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    size_t i = next.fetch_add(1);
                    if (i >= tasks.size()) return;
                    try {
                        work(i);
                    } catch (...) {
                        std::lock_guard lock(failure_mu);
                        if (!failure) failure = std::current_exception();
                        return;
                    }
                }
            });
        }
        for (auto& th : pool) th.join();
        if (failure) std::rethrow_exception(failure);
    }

    for (size_t pi = 0; pi < points.size(); ++pi) {
        SweepPointResult pr;
        pr.axis_value = points[pi].first;
        pr.spec = points[pi].second;
        pr.per_seed = std::move(grid[pi]);

        auto collect = [&](auto getter) {
            std::vector<double> vals;
            vals.reserve(pr.per_seed.size());
            for (const RunMetrics& m : pr.per_seed) vals.push_back(getter(m));
            return aggregate(vals);
        };
        pr.drr = collect([](const RunMetrics& m) { return m.drr; });
        pr.drr_recovery_only =
            collect([](const RunMetrics& m) { return m.drr_recovery_only(); });
        pr.latency_mean = collect([](const RunMetrics& m) { return m.latency_mean; });
        pr.latency_p95 = collect([](const RunMetrics& m) { return m.latency_p95(); });
        pr.buffer_mean = collect([](const RunMetrics& m) { return m.buffer_mean; });
        pr.buffer_max = collect(
            [](const RunMetrics& m) { return static_cast<double>(m.buffer_max); });
        result.points.push_back(std::move(pr));
    }
    return result;
}

}  // namespace

SweepResult sweep(const ExperimentSpec& base, const std::string& axis,
                  const std::vector<double>& values, unsigned threads) {
    if (values.empty()) throw std::invalid_argument("sweep needs at least one value");
    std::vector<std::pair<double, ExperimentSpec>> points;
    points.reserve(values.size());
    for (double v : values) points.emplace_back(v, apply_axis(base, axis, v));
    return sweep_impl(std::move(points), axis, threads);
}

SweepResult single_point(const ExperimentSpec& spec, unsigned threads) {
    std::vector<std::pair<double, ExperimentSpec>> points;
    points.emplace_back(0.0, spec);
    return sweep_impl(std::move(points), "none", threads);
}

}  // namespace swfc
