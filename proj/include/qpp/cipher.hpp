#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "qpp/key_schedule.hpp"

namespace qpp {

// Ciphertext with enough header to decrypt and to reject the wrong key.
// Body bit length is the smallest multiple of n >= plaintext_bits; the
// plaintext is zero-padded up to it before the pad acts.
struct CiphertextContainer {
    std::uint32_t n = 0;
    std::uint32_t m = 0;
    std::uint64_t plaintext_bits = 0;
    std::array<std::uint8_t, 8> key_fingerprint{};
    std::vector<std::uint8_t> body;

    std::uint64_t chunk_count() const { return (plaintext_bits + n - 1) / n; }

    friend bool operator==(const CiphertextContainer&, const CiphertextContainer&) = default;
};

// Chunk i of the zero-padded plaintext is permuted by pad entry
// index_for_chunk(key, i); chunks are concatenated in order. Chunks are
// independent (ECB-like by construction -- that independence is exactly the
// leakage the analysis module measures).
CiphertextContainer encrypt(std::span<const std::uint8_t> plaintext, const PadKey& key,
                            const Pad& pad);
CiphertextContainer encrypt(std::span<const std::uint8_t> plaintext, const PadKey& key);

// Applies the inverse permutations and truncates to the recorded plaintext
// length. Throws KeyMismatchError if the header does not match the key and
// CorruptDataError if the body length is inconsistent.
std::vector<std::uint8_t> decrypt(const CiphertextContainer& container, const PadKey& key,
                                  const Pad& pad);
std::vector<std::uint8_t> decrypt(const CiphertextContainer& container, const PadKey& key);

// Chunk indices where the ciphertext chunk equals the (padded) plaintext
// chunk. plaintext must be the exact input the container was built from
// (length is checked).
std::vector<std::uint64_t> collision_positions(std::span<const std::uint8_t> plaintext,
                                               const CiphertextContainer& container);

// QPPC wire format, bit-exact:
//   "QPPC" | version 0x01 | n BE32 | m BE32 | plaintext bit length BE64 |
//   seed fingerprint (8 bytes, CRC-64 of the seed, BE) | body bytes.
inline constexpr std::size_t kContainerHeaderSize = 29;
std::vector<std::uint8_t> serialize_container(const CiphertextContainer& container);
CiphertextContainer parse_container(std::span<const std::uint8_t> bytes);

}  // namespace qpp
