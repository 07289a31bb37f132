#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "swfc/prng.hpp"

namespace swfc {

// Fixed-width bit string holding one symbol payload. The only arithmetic is
// positionwise XOR; widths are constant within a stream and mixing widths is
// a caller bug.
class BitBlock {
public:
    BitBlock() = default;
    explicit BitBlock(uint32_t width_bits);

    static BitBlock random(uint32_t width_bits, PrngState& rng);

    uint32_t width() const { return width_; }
    size_t byte_size() const { return (static_cast<size_t>(width_) + 7) / 8; }

    bool get(uint32_t bit) const;
    void set(uint32_t bit, bool value);
    bool is_zero() const;

    BitBlock& operator^=(const BitBlock& other);

    bool operator==(const BitBlock& other) const = default;

    // Little-endian byte image, ceil(width/8) bytes, spare high bits zero.
    void append_bytes(std::vector<uint8_t>& out) const;
    static BitBlock from_bytes(std::span<const uint8_t> bytes, uint32_t width_bits);

private:
    uint32_t width_ = 0;
    std::vector<uint64_t> words_;
};

}  // namespace swfc
