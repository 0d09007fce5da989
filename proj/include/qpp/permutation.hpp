#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace qpp {

enum class ShuffleMode : std::uint8_t {
    // Verbatim shuffle from the QPP construction: every swap index K[i] is
    // drawn from [1, N]. Not the textbook Fisher-Yates; provably biased for
    // N >= 3 (N^N sequences cannot split evenly over N! permutations).
    Paper = 0,
    // Textbook Fisher-Yates: K[i] drawn from [1, i]. Uniform over all N!
    // permutations when the draws are uniform. Default for encryption.
    Unbiased = 1,
};

// Fixed-length vector of n bits, the unit the pad acts on. Packed MSB-first:
// bit i lives in byte i/8 under mask 0x80 >> (i%8), so byte streams map onto
// chunks in plain reading order. Trailing bits of the last byte stay zero.
class BitChunk {
public:
    explicit BitChunk(std::uint32_t n);
    BitChunk(std::uint32_t n, std::span<const std::uint8_t> packed);

    static BitChunk from_bytes(std::span<const std::uint8_t> bytes);  // n = 8 * size
    static BitChunk from_bits(std::initializer_list<int> bits);

    std::uint32_t n() const { return n_; }
    bool bit(std::uint32_t i) const { return (bytes_[i >> 3] >> (7 - (i & 7))) & 1u; }
    void set_bit(std::uint32_t i, bool v);
    std::uint32_t popcount() const;
    std::span<const std::uint8_t> bytes() const { return bytes_; }

    friend bool operator==(const BitChunk&, const BitChunk&) = default;

private:
    std::uint32_t n_ = 0;
    std::vector<std::uint8_t> bytes_;
};

// One N-dimensional permutation matrix, stored row-wise as destination ->
// source indices: map()[j] is the paper's S[j] (0-based here; the key-file
// boundary fixes the 1-based convention). Row j of the equivalent 0/1
// matrix has its single 1 in column map()[j].
class Permutation {
public:
    // Validates that map is a bijection on {0..n-1}.
    explicit Permutation(std::vector<std::uint32_t> map);

    static Permutation identity(std::uint32_t n);

    std::uint32_t n() const { return std::uint32_t(map_.size()); }
    std::span<const std::uint32_t> map() const { return map_; }

    friend bool operator==(const Permutation&, const Permutation&) = default;

private:
    std::vector<std::uint32_t> map_;
};

// Runs the descending swap loop S[K[i]] <-> S[i], i = N..1, over S
// initialized to the identity. k_values holds K[1..N] in position order,
// 1-based values. PaperMode requires K[i] in [1, N]; UnbiasedMode requires
// K[i] in [1, i]. Throws std::invalid_argument on length or range errors.
Permutation generate_from_keystream(std::uint32_t n, std::span<const std::uint32_t> k_values,
                                    ShuffleMode mode);

// Output bit j = input bit map[j]; popcount is preserved.
BitChunk apply(const Permutation& perm, const BitChunk& chunk);

// Same kernel over raw packed buffers of ceil(n/8) bytes each. in and out
// must not alias. Trailing bits of the last output byte are zeroed.
void apply_raw(const Permutation& perm, const std::uint8_t* in, std::uint8_t* out);

// The transpose: apply(invert(p), apply(p, c)) == c for every chunk c.
Permutation invert(const Permutation& perm);

// Explicit n x n 0/1 matrix, row-major, for cross-checking the index path.
// Verification-only: throws for n above max_n (default 64).
std::vector<std::uint8_t> to_dense_matrix(const Permutation& perm, std::uint32_t max_n = 64);

// True iff the permutation maps the chunk to itself (a collision).
bool fixes(const Permutation& perm, const BitChunk& chunk);

}  // namespace qpp
