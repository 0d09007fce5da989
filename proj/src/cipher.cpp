#include "qpp/cipher.hpp"

#include <algorithm>
#include <cstring>
#include <stdexcept>
#include <string>

#include "qpp/endian.hpp"
#include "qpp/errors.hpp"

namespace qpp {
namespace {

constexpr std::uint8_t kContainerMagic[4] = {'Q', 'P', 'P', 'C'};
constexpr std::uint8_t kContainerVersion = 0x01;

std::uint64_t padded_byte_count(std::uint64_t bits, std::uint32_t n) {
    const std::uint64_t chunks = (bits + n - 1) / n;
    return chunks * (n / 8);
}

void check_pad(const PadKey& key, const Pad& pad) {
    if (pad.size() != key.m || pad.n() != key.n)
        throw std::invalid_argument("cipher: pad does not match key dimensions");
}

}  // namespace

CiphertextContainer encrypt(std::span<const std::uint8_t> plaintext, const PadKey& key,
                            const Pad& pad) {
    validate_key(key);
    check_pad(key, pad);
    const std::uint32_t stride = key.n / 8;
    const std::uint64_t bits = std::uint64_t(plaintext.size()) * 8;
    const std::uint64_t chunks = (bits + key.n - 1) / key.n;

    CiphertextContainer out;
    out.n = key.n;
    out.m = key.m;
    out.plaintext_bits = bits;
    out.key_fingerprint = seed_fingerprint(key.seed);
    out.body.resize(chunks * stride);

    std::vector<std::uint8_t> last(stride, 0);  // zero-padded final chunk
    for (std::uint64_t i = 0; i < chunks; ++i) {
        const std::uint8_t* src = plaintext.data() + i * stride;
        if ((i + 1) * stride > plaintext.size()) {
            std::memcpy(last.data(), src, plaintext.size() - i * stride);
            src = last.data();
        }
        apply_raw(pad.perm(index_for_chunk(key, i)), src, out.body.data() + i * stride);
    }
    return out;
}

CiphertextContainer encrypt(std::span<const std::uint8_t> plaintext, const PadKey& key) {
    return encrypt(plaintext, key, derive_pad(key));
}

std::vector<std::uint8_t> decrypt(const CiphertextContainer& container, const PadKey& key,
                                  const Pad& pad) {
    validate_key(key);
    check_pad(key, pad);
    if (container.n != key.n || container.m != key.m)
        throw KeyMismatchError("decrypt: container (n=" + std::to_string(container.n) +
                               ", m=" + std::to_string(container.m) + ") does not match key (n=" +
                               std::to_string(key.n) + ", m=" + std::to_string(key.m) + ")");
    if (container.key_fingerprint != seed_fingerprint(key.seed))
        throw KeyMismatchError("decrypt: seed fingerprint mismatch");
    const std::uint32_t stride = key.n / 8;
    if (container.body.size() != padded_byte_count(container.plaintext_bits, key.n))
        throw CorruptDataError("decrypt: body length inconsistent with plaintext bit length");

    const std::uint64_t chunks = container.chunk_count();
    std::vector<std::uint8_t> padded(container.body.size());
    for (std::uint64_t i = 0; i < chunks; ++i)
        apply_raw(pad.inverse(index_for_chunk(key, i)), container.body.data() + i * stride,
                  padded.data() + i * stride);

    padded.resize((container.plaintext_bits + 7) / 8);
    if (container.plaintext_bits % 8)  // mask pad bits of a non-byte tail
        padded.back() &= std::uint8_t(0xFF00 >> (container.plaintext_bits % 8));
    return padded;
}

std::vector<std::uint8_t> decrypt(const CiphertextContainer& container, const PadKey& key) {
    return decrypt(container, key, derive_pad(key));
}

std::vector<std::uint64_t> collision_positions(std::span<const std::uint8_t> plaintext,
                                               const CiphertextContainer& container) {
    if (container.plaintext_bits != std::uint64_t(plaintext.size()) * 8)
        throw std::invalid_argument("collision_positions: plaintext length does not match container");
    const std::uint32_t stride = container.n / 8;
    const std::uint64_t chunks = container.chunk_count();
    std::vector<std::uint64_t> hits;
    std::vector<std::uint8_t> last(stride, 0);
    for (std::uint64_t i = 0; i < chunks; ++i) {
        const std::uint8_t* src = plaintext.data() + i * stride;
        if ((i + 1) * stride > plaintext.size()) {
            std::fill(last.begin(), last.end(), 0);
            std::memcpy(last.data(), src, plaintext.size() - i * stride);
            src = last.data();
        }
        if (std::memcmp(src, container.body.data() + i * stride, stride) == 0) hits.push_back(i);
    }
    return hits;
}

std::vector<std::uint8_t> serialize_container(const CiphertextContainer& container) {
    std::vector<std::uint8_t> out(kContainerHeaderSize + container.body.size());
    std::copy(std::begin(kContainerMagic), std::end(kContainerMagic), out.begin());
    out[4] = kContainerVersion;
    store_be32(out.data() + 5, container.n);
    store_be32(out.data() + 9, container.m);
    store_be64(out.data() + 13, container.plaintext_bits);
    std::copy(container.key_fingerprint.begin(), container.key_fingerprint.end(),
              out.begin() + 21);
    std::copy(container.body.begin(), container.body.end(), out.begin() + kContainerHeaderSize);
    return out;
}

CiphertextContainer parse_container(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kContainerHeaderSize)
        throw CorruptDataError("container: truncated header");
    if (!std::equal(std::begin(kContainerMagic), std::end(kContainerMagic), bytes.begin()))
        throw CorruptDataError("container: bad magic");
    if (bytes[4] != kContainerVersion) throw CorruptDataError("container: unsupported version");
    CiphertextContainer c;
    c.n = load_be32(bytes.data() + 5);
    c.m = load_be32(bytes.data() + 9);
    c.plaintext_bits = load_be64(bytes.data() + 13);
    std::copy(bytes.begin() + 21, bytes.begin() + 29, c.key_fingerprint.begin());
    if (c.n < 8 || c.n % 8 != 0 || c.m < 1) throw CorruptDataError("container: bad dimensions");
    const std::uint64_t expected = padded_byte_count(c.plaintext_bits, c.n);
    if (bytes.size() - kContainerHeaderSize != expected)
        throw CorruptDataError("container: body is " +
                               std::to_string(bytes.size() - kContainerHeaderSize) +
                               " bytes, expected " + std::to_string(expected));
    c.body.assign(bytes.begin() + kContainerHeaderSize, bytes.end());
    return c;
}

}  // namespace qpp
