#include "qpp/permutation.hpp"

#include <bit>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

namespace qpp {

BitChunk::BitChunk(std::uint32_t n) : n_(n), bytes_((n + 7) / 8, 0) {
    if (n == 0) throw std::invalid_argument("BitChunk: n must be positive");
}

BitChunk::BitChunk(std::uint32_t n, std::span<const std::uint8_t> packed) : BitChunk(n) {
    if (packed.size() != bytes_.size())
        throw std::invalid_argument("BitChunk: packed size does not match n");
    std::copy(packed.begin(), packed.end(), bytes_.begin());
    if (n_ % 8) bytes_.back() &= std::uint8_t(0xFF00 >> (n_ % 8));  // keep tail bits zero
}

BitChunk BitChunk::from_bytes(std::span<const std::uint8_t> bytes) {
    return BitChunk(std::uint32_t(bytes.size()) * 8, bytes);
}

BitChunk BitChunk::from_bits(std::initializer_list<int> bits) {
    BitChunk chunk(std::uint32_t(bits.size()));
    std::uint32_t i = 0;
    for (int b : bits) chunk.set_bit(i++, b != 0);
    return chunk;
}

void BitChunk::set_bit(std::uint32_t i, bool v) {
    const std::uint8_t mask = std::uint8_t(0x80u >> (i & 7));
    if (v)
        bytes_[i >> 3] |= mask;
    else
        bytes_[i >> 3] &= std::uint8_t(~mask);
}

std::uint32_t BitChunk::popcount() const {
    std::uint32_t total = 0;
    for (std::uint8_t b : bytes_) total += std::uint32_t(std::popcount(b));
    return total;
}

Permutation::Permutation(std::vector<std::uint32_t> map) : map_(std::move(map)) {
    const std::uint32_t n = std::uint32_t(map_.size());
    if (n == 0) throw std::invalid_argument("Permutation: empty map");
    std::vector<bool> seen(n, false);
    for (std::uint32_t v : map_) {
        if (v >= n || seen[v]) throw std::invalid_argument("Permutation: map is not a bijection");
        seen[v] = true;
    }
}

Permutation Permutation::identity(std::uint32_t n) {
    std::vector<std::uint32_t> map(n);
    std::iota(map.begin(), map.end(), 0u);
    return Permutation(std::move(map));
}

Permutation generate_from_keystream(std::uint32_t n, std::span<const std::uint32_t> k_values,
                                    ShuffleMode mode) {
    if (n == 0) throw std::invalid_argument("generate_from_keystream: n must be positive");
    if (k_values.size() != n)
        throw std::invalid_argument("generate_from_keystream: expected " + std::to_string(n) +
                                    " keystream values, got " + std::to_string(k_values.size()));
    for (std::uint32_t i = 0; i < n; ++i) {
        const std::uint32_t hi = mode == ShuffleMode::Paper ? n : i + 1;
        if (k_values[i] < 1 || k_values[i] > hi)
            throw std::invalid_argument("generate_from_keystream: K[" + std::to_string(i + 1) +
                                        "]=" + std::to_string(k_values[i]) + " out of [1, " +
                                        std::to_string(hi) + "]");
    }
    std::vector<std::uint32_t> s(n);
    std::iota(s.begin(), s.end(), 0u);
    for (std::uint32_t i = n; i-- > 0;) std::swap(s[k_values[i] - 1], s[i]);
    return Permutation(std::move(s));
}

void apply_raw(const Permutation& perm, const std::uint8_t* in, std::uint8_t* out) {
    const auto map = perm.map();
    const std::uint32_t n = perm.n();
    const std::uint32_t full = n / 8;
    for (std::uint32_t b = 0; b < full; ++b) {
        const std::uint32_t* src = map.data() + b * 8;
        std::uint8_t acc = 0;
        for (int k = 0; k < 8; ++k) {
            const std::uint32_t s = src[k];
            acc = std::uint8_t((acc << 1) | ((in[s >> 3] >> (7 - (s & 7))) & 1u));
        }
        out[b] = acc;
    }
    if (n % 8) {
        std::uint8_t acc = 0;
        for (std::uint32_t j = full * 8; j < n; ++j) {
            const std::uint32_t s = map[j];
            acc |= std::uint8_t(((in[s >> 3] >> (7 - (s & 7))) & 1u) << (7 - (j & 7)));
        }
        out[full] = acc;
    }
}

BitChunk apply(const Permutation& perm, const BitChunk& chunk) {
    if (perm.n() != chunk.n())
        throw std::invalid_argument("apply: permutation dimension " + std::to_string(perm.n()) +
                                    " != chunk dimension " + std::to_string(chunk.n()));
    BitChunk out(chunk.n());
    std::vector<std::uint8_t> buf((chunk.n() + 7) / 8);
    apply_raw(perm, chunk.bytes().data(), buf.data());
    return BitChunk(chunk.n(), buf);
}

Permutation invert(const Permutation& perm) {
    const auto map = perm.map();
    std::vector<std::uint32_t> inv(map.size());
    for (std::uint32_t j = 0; j < map.size(); ++j) inv[map[j]] = j;
    return Permutation(std::move(inv));
}

std::vector<std::uint8_t> to_dense_matrix(const Permutation& perm, std::uint32_t max_n) {
    const std::uint32_t n = perm.n();
    if (n > max_n)
        throw std::invalid_argument("to_dense_matrix: n=" + std::to_string(n) +
                                    " above verification bound " + std::to_string(max_n));
    std::vector<std::uint8_t> matrix(std::size_t(n) * n, 0);
    for (std::uint32_t i = 0; i < n; ++i) matrix[std::size_t(i) * n + perm.map()[i]] = 1;
    return matrix;
}

bool fixes(const Permutation& perm, const BitChunk& chunk) {
    if (perm.n() != chunk.n())
        throw std::invalid_argument("fixes: dimension mismatch");
    const auto map = perm.map();
    for (std::uint32_t j = 0; j < map.size(); ++j)
        if (chunk.bit(map[j]) != chunk.bit(j)) return false;
    return true;
}

}  // namespace qpp
