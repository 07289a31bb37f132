#include "swfc/bitblock.hpp"

#include <stdexcept>

namespace swfc {

namespace {
size_t words_for(uint32_t width_bits) {
    return (static_cast<size_t>(width_bits) + 63) / 64;
}
}  // namespace

BitBlock::BitBlock(uint32_t width_bits)
    : width_(width_bits), words_(words_for(width_bits), 0) {}

BitBlock BitBlock::random(uint32_t width_bits, PrngState& rng) {
    BitBlock b(width_bits);
    for (auto& w : b.words_) w = prng_next(rng);
    if (width_bits % 64 != 0 && !b.words_.empty()) {
        b.words_.back() &= (uint64_t{1} << (width_bits % 64)) - 1;
    }
    return b;
}

bool BitBlock::get(uint32_t bit) const {
    if (bit >= width_) throw std::out_of_range("BitBlock::get past width");
    return (words_[bit / 64] >> (bit % 64)) & 1;
}

void BitBlock::set(uint32_t bit, bool value) {
    if (bit >= width_) throw std::out_of_range("BitBlock::set past width");
    uint64_t mask = uint64_t{1} << (bit % 64);
    if (value) {
        words_[bit / 64] |= mask;
    } else {
        words_[bit / 64] &= ~mask;
    }
}

bool BitBlock::is_zero() const {
    for (uint64_t w : words_) {
        if (w != 0) return false;
    }
    return true;
}

BitBlock& BitBlock::operator^=(const BitBlock& other) {
    if (width_ != other.width_) {
        throw std::invalid_argument("BitBlock width mismatch");
    }
    for (size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
    return *this;
}

void BitBlock::append_bytes(std::vector<uint8_t>& out) const {
    size_t n = byte_size();
    for (size_t i = 0; i < n; ++i) {
        out.push_back(static_cast<uint8_t>(words_[i / 8] >> (8 * (i % 8))));
    }
}

BitBlock BitBlock::from_bytes(std::span<const uint8_t> bytes, uint32_t width_bits) {
    BitBlock b(width_bits);
    size_t n = b.byte_size();
    if (bytes.size() < n) {
        throw std::invalid_argument("BitBlock::from_bytes short buffer");
    }
    for (size_t i = 0; i < n; ++i) {
        b.words_[i / 8] |= static_cast<uint64_t>(bytes[i]) << (8 * (i % 8));
    }
    if (width_bits % 64 != 0 && !b.words_.empty()) {
        b.words_.back() &= (uint64_t{1} << (width_bits % 64)) - 1;
    }
    return b;
}

}  // namespace swfc
