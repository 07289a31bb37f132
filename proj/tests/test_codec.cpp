#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "swfc/codec.hpp"

using namespace swfc;

namespace {

CodecConfig small_cfg() {
    CodecConfig cfg;
    cfg.window_symbols = 5;
    cfg.degree = 3;
    cfg.segments_per_packet = 1;
    cfg.parities_per_packet = 1;
    cfg.payload_bits = 32;
    cfg.seed = 1234;
    return cfg;
}

std::vector<BitBlock> fresh_data(const CodecConfig& cfg, PrngState& rng) {
    std::vector<BitBlock> d;
    for (uint32_t j = 0; j < cfg.segments_per_packet; ++j) {
        d.push_back(BitBlock::random(cfg.payload_bits, rng));
    }
    return d;
}

}  // namespace

TEST_CASE("config validation") {
    CodecConfig cfg = small_cfg();
    CHECK_NOTHROW(cfg.validate());
    cfg.degree = 6;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = small_cfg();
    cfg.window_symbols = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = small_cfg();
    cfg.parities_per_packet = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    CHECK(small_cfg().rate() == doctest::Approx(0.5));
    CHECK(small_cfg().density() == doctest::Approx(0.6));
}

TEST_CASE("degree_from_density rounds and clamps") {
    CHECK(CodecConfig::degree_from_density(0.5, 50) == 25);
    CHECK(CodecConfig::degree_from_density(0.5, 5) == 3);  // 2.5 rounds up
    CHECK(CodecConfig::degree_from_density(0.01, 10) == 1);
    CHECK(CodecConfig::degree_from_density(1.0, 10) == 10);
    CHECK_THROWS_AS(CodecConfig::degree_from_density(0.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(CodecConfig::degree_from_density(1.5, 10), std::invalid_argument);
}

TEST_CASE("parity indices stay inside the window and behind the packet") {
    CodecConfig cfg = small_cfg();
    for (uint64_t seq : {0ull, 1ull, 3ull, 5ull, 6ull, 100ull}) {
        auto idx = parity_indices(cfg, seq, 0);
        uint64_t end = seq;  // one segment per packet
        uint64_t win = std::min<uint64_t>(end, cfg.window_symbols);
        CHECK(idx.size() == std::min<uint64_t>(cfg.degree, win));
        CHECK(std::is_sorted(idx.begin(), idx.end()));
        std::set<uint64_t> uniq(idx.begin(), idx.end());
        CHECK(uniq.size() == idx.size());
        for (uint64_t i : idx) {
            CHECK(i < end);
            CHECK(i + cfg.window_symbols >= end);
        }
    }
}

TEST_CASE("parity indices are deterministic and slot-independent") {
    CodecConfig cfg = small_cfg();
    cfg.parities_per_packet = 3;
    auto a = parity_indices(cfg, 40, 1);
    auto b = parity_indices(cfg, 40, 1);
    CHECK(a == b);

    // Different slots draw from independent streams; with only C(5,3) = 10
    // possible sets collisions happen, but not for every packet.
    bool any_slot_diff = false;
    for (uint64_t seq = 10; seq < 30; ++seq) {
        if (parity_indices(cfg, seq, 0) != parity_indices(cfg, seq, 1)) {
            any_slot_diff = true;
        }
    }
    CHECK(any_slot_diff);

    CodecConfig other = cfg;
    other.seed = 99;
    bool any_seed_diff = false;
    for (uint64_t seq = 10; seq < 30; ++seq) {
        if (parity_indices(cfg, seq, 0) != parity_indices(other, seq, 0)) {
            any_seed_diff = true;
        }
    }
    CHECK(any_seed_diff);
}

TEST_CASE("encoder parities XOR exactly the selected data") {
    CodecConfig cfg = small_cfg();
    cfg.parities_per_packet = 2;
    Encoder enc(cfg);
    PrngState rng{7};

    std::vector<BitBlock> history;
    for (uint64_t n = 0; n < 30; ++n) {
        auto data = fresh_data(cfg, rng);
        Packet p = enc.encode_next(data);
        CHECK(p.seq == n);
        CHECK(p.data == data);
        history.insert(history.end(), data.begin(), data.end());

        auto sets = reconstruct_indices(cfg, n);
        REQUIRE(sets.size() == 2);
        for (uint32_t k = 0; k < 2; ++k) {
            BitBlock expect(cfg.payload_bits);
            for (uint64_t i : sets[k]) {
                // History index == symbol index; parity never reaches the
                // packet's own data.
                CHECK(i < n);
                expect ^= history[i];
            }
            CHECK(p.parity[k] == expect);
            CHECK(p.parity_degrees[k] == sets[k].size());
        }
    }
}

TEST_CASE("first packet has empty parities") {
    Encoder enc(small_cfg());
    PrngState rng{3};
    Packet p = enc.encode_next(fresh_data(enc.config(), rng));
    CHECK(p.parity_degrees[0] == 0);
    CHECK(p.parity[0].is_zero());
}

TEST_CASE("encoder rejects malformed input") {
    Encoder enc(small_cfg());
    CHECK_THROWS_AS(enc.encode_next({}), std::invalid_argument);
    std::vector<BitBlock> wrong = {BitBlock(8)};
    CHECK_THROWS_AS(enc.encode_next(wrong), std::invalid_argument);
}

TEST_CASE("multi-segment packets advance the symbol index by l") {
    CodecConfig cfg = small_cfg();
    cfg.segments_per_packet = 2;
    cfg.window_symbols = 6;
    cfg.degree = 4;
    Encoder enc(cfg);
    PrngState rng{11};
    std::vector<BitBlock> history;
    for (uint64_t n = 0; n < 12; ++n) {
        auto data = fresh_data(cfg, rng);
        Packet p = enc.encode_next(data);
        history.insert(history.end(), data.begin(), data.end());
        auto idx = parity_indices(cfg, n, 0);
        BitBlock expect(cfg.payload_bits);
        for (uint64_t i : idx) {
            CHECK(i < n * 2);
            CHECK(i + cfg.window_symbols >= n * 2);
            expect ^= history[i];
        }
        CHECK(p.parity[0] == expect);
    }
}

TEST_CASE("packet serialization round-trips") {
    CodecConfig cfg = small_cfg();
    cfg.parities_per_packet = 2;
    cfg.payload_bits = 52;  // not byte- or word-aligned
    Encoder enc(cfg);
    PrngState rng{21};
    for (int n = 0; n < 8; ++n) {
        Packet p = enc.encode_next(fresh_data(cfg, rng));
        std::vector<uint8_t> wire;
        serialize_packet(cfg, p, wire);
        CHECK(wire.size() == packet_wire_size(cfg));

        size_t used = 0;
        Packet q = deserialize_packet(cfg, wire, &used);
        CHECK(used == wire.size());
        CHECK(q.seq == p.seq);
        CHECK(q.data == p.data);
        CHECK(q.parity == p.parity);
    }
}

TEST_CASE("deserialize rejects mismatched headers and short buffers") {
    CodecConfig cfg = small_cfg();
    Encoder enc(cfg);
    PrngState rng{2};
    Packet p = enc.encode_next(fresh_data(cfg, rng));
    std::vector<uint8_t> wire;
    serialize_packet(cfg, p, wire);

    CodecConfig other = cfg;
    other.payload_bits = 64;
    CHECK_THROWS_AS(deserialize_packet(other, wire), std::invalid_argument);

    std::vector<uint8_t> shorted(wire.begin(), wire.end() - 1);
    CHECK_THROWS_AS(deserialize_packet(cfg, shorted), std::invalid_argument);
}

TEST_CASE("trace records round-trip") {
    CodecConfig cfg = small_cfg();
    Encoder enc(cfg);
    PrngState rng{31};
    std::vector<uint8_t> buf;
    std::vector<TraceRecord> sent;
    for (uint64_t n = 0; n < 10; ++n) {
        TraceRecord rec;
        rec.seq = n;
        rec.delivered = n % 3 != 0;
        Packet p = enc.encode_next(fresh_data(cfg, rng));
        if (rec.delivered) rec.packet = p;
        append_trace_record(cfg, rec, buf);
        sent.push_back(rec);
    }

    size_t offset = 0;
    TraceRecord rec;
    size_t count = 0;
    while (read_trace_record(cfg, buf, offset, rec)) {
        CHECK(rec.delivered == sent[count].delivered);
        CHECK(rec.seq == sent[count].seq);
        if (rec.delivered) {
            CHECK(rec.packet.data == sent[count].packet.data);
            CHECK(rec.packet.parity == sent[count].packet.parity);
        }
        ++count;
    }
    CHECK(count == 10);
    CHECK(offset == buf.size());
}
