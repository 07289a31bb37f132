#include "swfc/codec.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace swfc {

void CodecConfig::validate() const {
    if (window_symbols < 1) throw std::invalid_argument("window_symbols must be >= 1");
    if (degree < 1 || degree > window_symbols) {
        throw std::invalid_argument("degree must be in [1, window_symbols]");
    }
    if (segments_per_packet < 1) {
        throw std::invalid_argument("segments_per_packet must be >= 1");
    }
    if (parities_per_packet < 1) {
        throw std::invalid_argument("parities_per_packet must be >= 1");
    }
    if (payload_bits < 1) throw std::invalid_argument("payload_bits must be >= 1");
}

uint32_t CodecConfig::degree_from_density(double density, uint32_t window_symbols) {
    if (!(density > 0.0) || density > 1.0) {
        throw std::invalid_argument("parity density must be in (0, 1]");
    }
    auto d = static_cast<uint32_t>(density * window_symbols + 0.5);
    return std::clamp<uint32_t>(d, 1, window_symbols);
}

std::vector<uint64_t> parity_indices(const CodecConfig& cfg, uint64_t seq, uint32_t slot) {
    // Window for packet seq: the last window_symbols data symbols, all of
    // them older than the packet's own data.
    uint64_t end = seq * cfg.segments_per_packet;  // exclusive
    uint64_t win = std::min<uint64_t>(end, cfg.window_symbols);
    std::vector<uint64_t> picks;
    if (win == 0) return picks;

    uint64_t want = std::min<uint64_t>(cfg.degree, win);
    uint64_t base = end - win;
    PrngState rng{seed_mix(cfg.seed, seq, slot)};
    picks.reserve(want);
    // Sample without replacement by rejection; duplicates are simply redrawn.
    while (picks.size() < want) {
        uint64_t idx = base + prng_next(rng) % win;
        if (std::find(picks.begin(), picks.end(), idx) == picks.end()) {
            picks.push_back(idx);
        }
    }
    std::sort(picks.begin(), picks.end());
    return picks;
}

std::vector<std::vector<uint64_t>> reconstruct_indices(const CodecConfig& cfg, uint64_t seq) {
    std::vector<std::vector<uint64_t>> all;
    all.reserve(cfg.parities_per_packet);
    for (uint32_t k = 0; k < cfg.parities_per_packet; ++k) {
        all.push_back(parity_indices(cfg, seq, k));
    }
    return all;
}

Encoder::Encoder(CodecConfig cfg) : cfg_(cfg) {
    cfg_.validate();
    window_.resize(cfg_.window_symbols);
}

Packet Encoder::encode_next(const std::vector<BitBlock>& data) {
    if (data.size() != cfg_.segments_per_packet) {
        throw std::invalid_argument("encode_next expects exactly " +
                                    std::to_string(cfg_.segments_per_packet) +
                                    " data symbols");
    }
    for (const BitBlock& b : data) {
        if (b.width() != cfg_.payload_bits) {
            throw std::invalid_argument("data symbol width mismatch");
        }
    }

    Packet p;
    p.seq = next_seq_;
    p.data = data;
    p.parity.reserve(cfg_.parities_per_packet);
    p.parity_degrees.reserve(cfg_.parities_per_packet);
    for (uint32_t k = 0; k < cfg_.parities_per_packet; ++k) {
        std::vector<uint64_t> idx = parity_indices(cfg_, next_seq_, k);
        BitBlock sym(cfg_.payload_bits);
        for (uint64_t i : idx) sym ^= window_[i % cfg_.window_symbols];
        p.parity.push_back(std::move(sym));
        p.parity_degrees.push_back(static_cast<uint32_t>(idx.size()));
    }

    uint64_t first = next_seq_ * cfg_.segments_per_packet;
    for (uint32_t j = 0; j < cfg_.segments_per_packet; ++j) {
        window_[(first + j) % cfg_.window_symbols] = data[j];
    }
    ++next_seq_;
    return p;
}

namespace {

void put_u16(std::vector<uint8_t>& out, uint16_t v) {
    out.push_back(static_cast<uint8_t>(v));
    out.push_back(static_cast<uint8_t>(v >> 8));
}

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<uint8_t>& out, uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

uint64_t get_u64(std::span<const uint8_t> b, size_t at) {
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(b[at + i]) << (8 * i);
    return v;
}

uint32_t get_u32(std::span<const uint8_t> b, size_t at) {
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(b[at + i]) << (8 * i);
    return v;
}

uint16_t get_u16(std::span<const uint8_t> b, size_t at) {
    return static_cast<uint16_t>(b[at] | (b[at + 1] << 8));
}

constexpr size_t kHeaderBytes = 16;

}  // namespace

size_t packet_wire_size(const CodecConfig& cfg) {
    size_t sym = (static_cast<size_t>(cfg.payload_bits) + 7) / 8;
    return kHeaderBytes +
           sym * (cfg.segments_per_packet + cfg.parities_per_packet);
}

void serialize_packet(const CodecConfig& cfg, const Packet& p, std::vector<uint8_t>& out) {
    put_u64(out, p.seq);
    put_u16(out, static_cast<uint16_t>(cfg.segments_per_packet));
    put_u16(out, static_cast<uint16_t>(cfg.parities_per_packet));
    put_u32(out, cfg.payload_bits);
    for (const BitBlock& b : p.data) b.append_bytes(out);
    for (const BitBlock& b : p.parity) b.append_bytes(out);
}

Packet deserialize_packet(const CodecConfig& cfg, std::span<const uint8_t> bytes,
                          size_t* consumed) {
    size_t need = packet_wire_size(cfg);
    if (bytes.size() < need) throw std::invalid_argument("packet buffer too short");
    if (get_u16(bytes, 8) != cfg.segments_per_packet ||
        get_u16(bytes, 10) != cfg.parities_per_packet ||
        get_u32(bytes, 12) != cfg.payload_bits) {
        throw std::invalid_argument("packet header disagrees with codec config");
    }

    Packet p;
    p.seq = get_u64(bytes, 0);
    size_t sym = (static_cast<size_t>(cfg.payload_bits) + 7) / 8;
    size_t at = kHeaderBytes;
    for (uint32_t j = 0; j < cfg.segments_per_packet; ++j, at += sym) {
        p.data.push_back(BitBlock::from_bytes(bytes.subspan(at), cfg.payload_bits));
    }
    for (uint32_t k = 0; k < cfg.parities_per_packet; ++k, at += sym) {
        p.parity.push_back(BitBlock::from_bytes(bytes.subspan(at), cfg.payload_bits));
    }
    if (consumed) *consumed = at;
    return p;
}

void append_trace_record(const CodecConfig& cfg, const TraceRecord& rec,
                         std::vector<uint8_t>& out) {
    out.push_back(rec.delivered ? 1 : 0);
    if (rec.delivered) {
        serialize_packet(cfg, rec.packet, out);
    } else {
        put_u64(out, rec.seq);
    }
}

bool read_trace_record(const CodecConfig& cfg, std::span<const uint8_t> bytes,
                       size_t& offset, TraceRecord& rec) {
    if (offset >= bytes.size()) return false;
    uint8_t flag = bytes[offset++];
    if (flag > 1) throw std::invalid_argument("corrupt trace flag");
    rec.delivered = flag == 1;
    if (rec.delivered) {
        size_t used = 0;
        rec.packet = deserialize_packet(cfg, bytes.subspan(offset), &used);
        rec.seq = rec.packet.seq;
        offset += used;
    } else {
        if (bytes.size() - offset < 8) throw std::invalid_argument("truncated trace record");
        rec.seq = get_u64(bytes.subspan(offset), 0);
        rec.packet = Packet{};
        offset += 8;
    }
    return true;
}

}  // namespace swfc
