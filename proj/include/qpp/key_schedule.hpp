#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "qpp/permutation.hpp"
#include "qpp/prng.hpp"

namespace qpp {

// Compact secret: (seed, N, m, shuffle mode). Deterministically expands to
// the pad of m permutations and to the per-chunk matrix-index stream, so
// the key stays O(1) while both sides reproduce which matrix encrypted
// which chunk.
struct PadKey {
    Seed16 seed{};
    std::uint32_t n = 0;  // chunk size in bits; >= 8 and a multiple of 8
    std::uint32_t m = 0;  // pad size, >= 1
    ShuffleMode mode = ShuffleMode::Unbiased;

    friend bool operator==(const PadKey&, const PadKey&) = default;
};

// Throws std::invalid_argument unless n >= 8, n % 8 == 0, m >= 1.
void validate_key(const PadKey& key);

PadKey make_key(std::uint32_t n, std::uint32_t m, ShuffleMode mode, const Seed16& seed);

// Fresh key from std::random_device entropy.
PadKey keygen(std::uint32_t n, std::uint32_t m, ShuffleMode mode);
Seed16 random_seed();

// The expanded pad: m permutations and their inverses, indexed 0..m-1.
class Pad {
public:
    static Pad from_permutations(std::vector<Permutation> perms);

    std::uint32_t size() const { return std::uint32_t(perms_.size()); }
    std::uint32_t n() const { return perms_.empty() ? 0 : perms_[0].n(); }
    const Permutation& perm(std::uint32_t i) const { return perms_[i]; }
    const Permutation& inverse(std::uint32_t i) const { return inverses_[i]; }

private:
    Pad() = default;
    std::vector<Permutation> perms_;
    std::vector<Permutation> inverses_;
};

// Fills out with one permutation drawn from the stream: the n keystream
// values K[1..n] are drawn in ascending position order (rejection-sampled
// into the mode's range), then the descending swap loop runs. k_scratch
// must match out in size. Shared by pad derivation and the samplers in the
// analysis module so every consumer sees the same draw order.
void draw_permutation_map(std::span<std::uint32_t> out, std::span<std::uint32_t> k_scratch,
                          SplitMix64& stream, ShuffleMode mode);

Permutation draw_permutation(std::uint32_t n, SplitMix64& stream, ShuffleMode mode);

// Pad entry t comes from the (kPad, t) sub-stream of the seed, so entry t
// never depends on m: growing the pad keeps existing entries stable.
Pad derive_pad(const PadKey& key);

// Scheduled pad index for chunk i, uniform over [0, m-1]. Addressable by
// chunk index without replaying the stream.
std::uint32_t index_for_chunk(const PadKey& key, std::uint64_t chunk_index);

// CRC-64 of the seed, big-endian; embedded in ciphertext containers so
// decrypt can reject a wrong key before touching the body.
std::array<std::uint8_t, 8> seed_fingerprint(const Seed16& seed);

// QPPK key file, bit-exact:
//   "QPPK" | version 0x01 | mode (0x00 paper, 0x01 unbiased) |
//   n BE32 | m BE32 | seed[16] | CRC-32 of all preceding bytes, BE32.
inline constexpr std::size_t kKeyFileSize = 34;
std::vector<std::uint8_t> serialize_key(const PadKey& key);
PadKey parse_key(std::span<const std::uint8_t> bytes);  // CorruptDataError on damage

}  // namespace qpp
