#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "swfc/bitblock.hpp"

namespace swfc {

// Stream parameters shared by encoder and decoder. A packet carries l data
// symbols followed by m parity symbols, so the code rate is l/(l+m). Each
// parity XORs up to `degree` symbols drawn from the `window_symbols` most
// recent data symbols, none of them from the packet being emitted.
struct CodecConfig {
    uint32_t window_symbols = 50;
    uint32_t degree = 25;
    uint32_t segments_per_packet = 1;
    uint32_t parities_per_packet = 1;
    uint32_t payload_bits = 64;
    uint64_t seed = 1;

    double rate() const {
        return static_cast<double>(segments_per_packet) /
               (segments_per_packet + parities_per_packet);
    }
    double density() const {
        return static_cast<double>(degree) / window_symbols;
    }
    uint32_t window_packets() const {
        return (window_symbols + segments_per_packet - 1) / segments_per_packet;
    }

    // Throws std::invalid_argument on out-of-range parameters.
    void validate() const;

    // Round density * window to the nearest usable degree, clamped to [1, window].
    static uint32_t degree_from_density(double density, uint32_t window_symbols);
};

struct Packet {
    uint64_t seq = 0;
    std::vector<BitBlock> data;
    std::vector<BitBlock> parity;
    // Symbols actually combined per parity; below `degree` only during startup
    // while fewer than `degree` data symbols exist.
    std::vector<uint32_t> parity_degrees;
};

// Data symbol indices combined into parity slot `slot` of packet `seq`,
// sorted ascending. Pure in (config.seed, seq, slot): the per-packet reseed
// makes the choice independent of encoder call history, so a receiver can
// replay it for any packet in isolation.
std::vector<uint64_t> parity_indices(const CodecConfig& cfg, uint64_t seq, uint32_t slot);

// All m parity index sets for one packet.
std::vector<std::vector<uint64_t>> reconstruct_indices(const CodecConfig& cfg, uint64_t seq);

class Encoder {
public:
    explicit Encoder(CodecConfig cfg);

    // Consumes exactly segments_per_packet fresh data symbols and emits the
    // next packet. Data symbols pass through verbatim.
    Packet encode_next(const std::vector<BitBlock>& data);

    uint64_t next_seq() const { return next_seq_; }
    const CodecConfig& config() const { return cfg_; }

private:
    CodecConfig cfg_;
    std::vector<BitBlock> window_;  // ring over the last window_symbols data symbols
    uint64_t next_seq_ = 0;
};

// Wire image of one packet: seq (u64 LE), l (u16 LE), m (u16 LE),
// payload_bits (u32 LE), then data and parity symbol bytes in order.
size_t packet_wire_size(const CodecConfig& cfg);
void serialize_packet(const CodecConfig& cfg, const Packet& p, std::vector<uint8_t>& out);
// Throws std::invalid_argument when the header disagrees with cfg or the
// buffer is short. Parity degrees are not on the wire; the result leaves them
// empty (reconstruct via reconstruct_indices if needed).
Packet deserialize_packet(const CodecConfig& cfg, std::span<const uint8_t> bytes,
                          size_t* consumed = nullptr);

// Trace record stream: each record is a flag byte, 1 for a delivered packet
// followed by its wire image, 0 for a loss followed by the seq (u64 LE).
struct TraceRecord {
    bool delivered = false;
    uint64_t seq = 0;
    Packet packet;  // valid when delivered
};

void append_trace_record(const CodecConfig& cfg, const TraceRecord& rec,
                         std::vector<uint8_t>& out);
// Reads one record at `offset`, advancing it. Returns false at end of buffer.
bool read_trace_record(const CodecConfig& cfg, std::span<const uint8_t> bytes,
                       size_t& offset, TraceRecord& rec);

}  // namespace swfc
