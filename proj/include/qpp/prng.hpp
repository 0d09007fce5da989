#pragma once

#include <array>
#include <cstdint>

namespace qpp {

// 16-byte master seed shared by both sides of the channel.
using Seed16 = std::array<std::uint8_t, 16>;

// SplitMix64 finalizer, used both as the stream step and as a mixing
// function for seed derivation.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Deterministic 64-bit keystream (SplitMix64, Steele/Lea/Vigna constants).
// Bit-stable across platforms. Not cryptographically strong; key expansion
// quality is documented as out of scope for this artifact.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ull;
        return mix64(state_);
    }

    // Uniform in [0, bound) by rejection, so no modulo bias. bound == 1
    // returns 0 without consuming a draw.
    std::uint64_t below(std::uint64_t bound) {
        if (bound <= 1) return 0;
        // Largest multiple of bound representable; reject draws above it.
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        for (;;) {
            const std::uint64_t x = next();
            if (x < limit) return x % bound;
        }
    }

    // Uniform in [lo, hi] inclusive.
    std::uint64_t between(std::uint64_t lo, std::uint64_t hi) {
        return lo + below(hi - lo + 1);
    }

private:
    std::uint64_t state_;
};

// Domain separation tags (ASCII, read big-endian).
namespace purpose {
inline constexpr std::uint64_t kPad = 0x5150502D50414430ull;       // "QPP-PAD0"
inline constexpr std::uint64_t kIndex = 0x5150502D49445830ull;     // "QPP-IDX0"
inline constexpr std::uint64_t kTrial = 0x5150502D4D433030ull;     // "QPP-MC00"
inline constexpr std::uint64_t kPadTrial = 0x5150502D4D433031ull;  // "QPP-MC01"
inline constexpr std::uint64_t kSample = 0x5150502D534D5030ull;    // "QPP-SMP0"
}  // namespace purpose

// Seed of the (purpose, index) sub-stream of a master seed. Streams are
// addressable by counter, independent of evaluation order, which gives
// random access over chunk indices and lets simulation trials be seeded
// per work unit.
std::uint64_t stream_seed(const Seed16& seed, std::uint64_t purpose, std::uint64_t index);

}  // namespace qpp
