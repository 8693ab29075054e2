#pragma once

#include <cstdint>

namespace tsparse {

// SplitMix64 (Steele, Lea, Flood; as published by Vigna at
// https://prng.di.unimi.it/splitmix64.c).  Fixed constants, pure 64-bit
// integer arithmetic, so the stream is bit-identical on every platform.
// This is the single generator used for edge decisions and seed derivation;
// the stream layout (one draw per vertex pair, row-major i<j) is part of the
// graph sampling contract.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

// The SplitMix64 finalizer as a standalone bijective mixer on 64-bit words.
// For fixed master seed, index -> mix64(master + index) is injective, which
// is how per-sample seeds are derived in the experiment harness.
inline std::uint64_t mix64(std::uint64_t x) {
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace tsparse
