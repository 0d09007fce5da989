#include "qpp/key_schedule.hpp"

#include <random>
#include <stdexcept>
#include <string>

#include "qpp/checksum.hpp"
#include "qpp/endian.hpp"
#include "qpp/errors.hpp"

namespace qpp {

void validate_key(const PadKey& key) {
    if (key.n < 8 || key.n % 8 != 0)
        throw std::invalid_argument("key: n must be a multiple of 8, >= 8 (got " +
                                    std::to_string(key.n) + ")");
    if (key.m < 1) throw std::invalid_argument("key: m must be >= 1");
}

PadKey make_key(std::uint32_t n, std::uint32_t m, ShuffleMode mode, const Seed16& seed) {
    PadKey key{seed, n, m, mode};
    validate_key(key);
    return key;
}

Seed16 random_seed() {
    std::random_device rd;
    Seed16 seed{};
    for (std::size_t i = 0; i < seed.size(); i += 4) {
        const std::uint32_t w = rd();
        store_be32(seed.data() + i, w);
    }
    return seed;
}

PadKey keygen(std::uint32_t n, std::uint32_t m, ShuffleMode mode) {
    return make_key(n, m, mode, random_seed());
}

void draw_permutation_map(std::span<std::uint32_t> out, std::span<std::uint32_t> k_scratch,
                          SplitMix64& stream, ShuffleMode mode) {
    const std::uint32_t n = std::uint32_t(out.size());
    if (k_scratch.size() != n) throw std::invalid_argument("draw_permutation_map: scratch size");
    for (std::uint32_t i = 0; i < n; ++i) {
        const std::uint64_t hi = mode == ShuffleMode::Paper ? n : i + 1;
        k_scratch[i] = std::uint32_t(stream.between(1, hi));
    }
    for (std::uint32_t i = 0; i < n; ++i) out[i] = i;
    for (std::uint32_t i = n; i-- > 0;) std::swap(out[k_scratch[i] - 1], out[i]);
}

Permutation draw_permutation(std::uint32_t n, SplitMix64& stream, ShuffleMode mode) {
    std::vector<std::uint32_t> map(n);
    std::vector<std::uint32_t> k(n);
    draw_permutation_map(map, k, stream, mode);
    return Permutation(std::move(map));
}

Pad Pad::from_permutations(std::vector<Permutation> perms) {
    if (perms.empty()) throw std::invalid_argument("Pad: at least one permutation required");
    for (const auto& p : perms)
        if (p.n() != perms[0].n()) throw std::invalid_argument("Pad: mixed dimensions");
    Pad pad;
    pad.inverses_.reserve(perms.size());
    for (const auto& p : perms) pad.inverses_.push_back(invert(p));
    pad.perms_ = std::move(perms);
    return pad;
}

Pad derive_pad(const PadKey& key) {
    validate_key(key);
    std::vector<Permutation> perms;
    perms.reserve(key.m);
    std::vector<std::uint32_t> map(key.n);
    std::vector<std::uint32_t> k(key.n);
    for (std::uint32_t t = 0; t < key.m; ++t) {
        SplitMix64 stream(stream_seed(key.seed, purpose::kPad, t));
        draw_permutation_map(map, k, stream, key.mode);
        perms.emplace_back(map);
    }
    return Pad::from_permutations(std::move(perms));
}

std::uint32_t index_for_chunk(const PadKey& key, std::uint64_t chunk_index) {
    SplitMix64 stream(stream_seed(key.seed, purpose::kIndex, chunk_index));
    return std::uint32_t(stream.below(key.m));
}

std::array<std::uint8_t, 8> seed_fingerprint(const Seed16& seed) {
    std::array<std::uint8_t, 8> fp{};
    store_be64(fp.data(), crc64(seed));
    return fp;
}

namespace {
constexpr std::uint8_t kKeyMagic[4] = {'Q', 'P', 'P', 'K'};
constexpr std::uint8_t kKeyVersion = 0x01;
}  // namespace

std::vector<std::uint8_t> serialize_key(const PadKey& key) {
    validate_key(key);
    std::vector<std::uint8_t> out(kKeyFileSize);
    std::copy(std::begin(kKeyMagic), std::end(kKeyMagic), out.begin());
    out[4] = kKeyVersion;
    out[5] = std::uint8_t(key.mode);
    store_be32(out.data() + 6, key.n);
    store_be32(out.data() + 10, key.m);
    std::copy(key.seed.begin(), key.seed.end(), out.begin() + 14);
    store_be32(out.data() + 30, crc32({out.data(), 30}));
    return out;
}

PadKey parse_key(std::span<const std::uint8_t> bytes) {
    if (bytes.size() != kKeyFileSize)
        throw CorruptDataError("key file: expected " + std::to_string(kKeyFileSize) +
                               " bytes, got " + std::to_string(bytes.size()));
    if (!std::equal(std::begin(kKeyMagic), std::end(kKeyMagic), bytes.begin()))
        throw CorruptDataError("key file: bad magic");
    if (bytes[4] != kKeyVersion) throw CorruptDataError("key file: unsupported version");
    if (bytes[5] > 1) throw CorruptDataError("key file: unknown shuffle mode byte");
    if (load_be32(bytes.data() + 30) != crc32(bytes.first(30)))
        throw CorruptDataError("key file: CRC-32 mismatch");
    PadKey key;
    key.mode = ShuffleMode(bytes[5]);
    key.n = load_be32(bytes.data() + 6);
    key.m = load_be32(bytes.data() + 10);
    std::copy(bytes.begin() + 14, bytes.begin() + 30, key.seed.begin());
    try {
        validate_key(key);
    } catch (const std::invalid_argument& e) {
        throw CorruptDataError(std::string("key file: ") + e.what());
    }
    return key;
}

}  // namespace qpp
