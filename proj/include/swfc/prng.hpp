#pragma once

#include <cstdint>

namespace swfc {

// Deterministic 64-bit generator (splitmix64). Encoder and decoder run the
// same stream from a shared seed, so parity compositions never have to be
// carried inside packets.
struct PrngState {
    uint64_t s = 0;
};

inline uint64_t prng_next(PrngState& st) {
    st.s += 0x9E3779B97F4A7C15ull;
    uint64_t z = st.s;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Derives an independent substream seed. For a fixed base seed, distinct tags
// give distinct outputs (the state offset is injective in `tag`, and the
// generator's output scramble is a bijection).
inline uint64_t seed_mix(uint64_t seed, uint64_t tag) {
    PrngState st{seed + tag * 0xD1B54A32D192ED03ull};
    return prng_next(st);
}

inline uint64_t seed_mix(uint64_t seed, uint64_t a, uint64_t b) {
    return seed_mix(seed_mix(seed, a), b);
}

// Uniform double in [0, 1), 53 significant bits.
inline double prng_unit(PrngState& st) {
    return static_cast<double>(prng_next(st) >> 11) * 0x1.0p-53;
}

}  // namespace swfc
