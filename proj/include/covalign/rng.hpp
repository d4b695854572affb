#pragma once

#include <cstdint>

namespace covalign {

// xorshift64* generator. The exact update rule is part of the file-format
// contract: the same seed must yield the same stream on every platform, so
// generated artifacts are reproducible bit for bit.
class Xorshift64Star {
public:
    explicit Xorshift64Star(std::uint64_t seed)
        : state_(seed != 0 ? seed : 0x9e3779b97f4a7c15ULL) {}

    std::uint64_t next() {
        std::uint64_t x = state_;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        state_ = x;
        return x * 0x2545f4914f6cdd1dULL;
    }

    // One uniformly random bit per call.
    bool next_bit() { return (next() >> 63) != 0; }

    // Uniform value in [0, bound); bound > 0. Rejection-free modulo bias is
    // acceptable here: bounds in this codebase are tiny compared to 2^64.
    std::uint64_t next_below(std::uint64_t bound) { return next() % bound; }

private:
    std::uint64_t state_;
};

}  // namespace covalign
