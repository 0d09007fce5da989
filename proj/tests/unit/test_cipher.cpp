#include "doctest.h"

#include <numeric>
#include <stdexcept>

#include "qpp/cipher.hpp"
#include "qpp/errors.hpp"
#include "test_support.hpp"

using namespace qpp;
using qpp::test::random_bytes;
using qpp::test::seed_of;

namespace {

std::uint64_t total_popcount(std::span<const std::uint8_t> bytes) {
    std::uint64_t total = 0;
    for (std::uint8_t b : bytes) total += std::uint64_t(std::popcount(b));
    return total;
}

}  // namespace

TEST_CASE("empty plaintext encrypts to an empty body and decrypts back") {
    const auto key = make_key(64, 4, ShuffleMode::Unbiased, seed_of(30, 1));
    const auto container = encrypt({}, key);
    CHECK(container.plaintext_bits == 0);
    CHECK(container.body.empty());
    CHECK(decrypt(container, key).empty());
}

TEST_CASE("all-zero plaintext is a fixed point of every pad") {
    const auto key = make_key(64, 16, ShuffleMode::Unbiased, seed_of(30, 2));
    const std::vector<std::uint8_t> zeros(1000, 0);
    const auto container = encrypt(zeros, key);
    CHECK(std::all_of(container.body.begin(), container.body.end(),
                      [](std::uint8_t b) { return b == 0; }));
}

TEST_CASE("hand-traced single-transposition pad: 0b10000000 -> 0b01000000") {
    const auto key = make_key(8, 1, ShuffleMode::Unbiased, seed_of(30, 3));
    // forced pad: one permutation swapping bit positions 1 and 2 (1-based)
    const Pad pad = Pad::from_permutations(
        {Permutation(std::vector<std::uint32_t>{1, 0, 2, 3, 4, 5, 6, 7})});
    const std::vector<std::uint8_t> plaintext{0b10000000};
    const auto container = encrypt(plaintext, key, pad);
    REQUIRE(container.body.size() == 1);
    CHECK(container.body[0] == 0b01000000);
    CHECK(decrypt(container, key, pad) == plaintext);
}

TEST_CASE("roundtrip across dimensions and pad sizes") {
    SplitMix64 gen(mix64(3099));
    for (std::uint32_t n : {8u, 64u, 2048u}) {
        for (std::uint32_t m : {1u, 16u}) {
            const auto key = make_key(n, m, ShuffleMode::Unbiased, seed_of(30, n + m));
            const Pad pad = derive_pad(key);
            for (std::size_t len : {std::size_t(0), std::size_t(1), std::size_t(255),
                                    std::size_t((n / 8) * 3 + 5)}) {
                const auto plaintext = random_bytes(gen, len);
                const auto container = encrypt(plaintext, key, pad);
                CHECK(container.body.size() % (n / 8) == 0);
                CHECK(container.body.size() >= plaintext.size());
                CHECK(decrypt(container, key, pad) == plaintext);
            }
        }
    }
}

TEST_CASE("popcount is conserved per chunk and in total") {
    SplitMix64 gen(12345);
    const auto key = make_key(64, 8, ShuffleMode::Unbiased, seed_of(30, 5));
    const Pad pad = derive_pad(key);
    const auto plaintext = random_bytes(gen, 512);
    const auto container = encrypt(plaintext, key, pad);
    CHECK(total_popcount(container.body) == total_popcount(plaintext));
    for (std::size_t chunk = 0; chunk < 512 / 8; ++chunk) {
        const auto pt = std::span(plaintext).subspan(chunk * 8, 8);
        const auto ct = std::span(container.body).subspan(chunk * 8, 8);
        CHECK(total_popcount(pt) == total_popcount(ct));
    }
}

TEST_CASE("chunk locality: flipping one chunk leaves the others untouched") {
    SplitMix64 gen(777);
    const auto key = make_key(64, 8, ShuffleMode::Unbiased, seed_of(30, 6));
    const Pad pad = derive_pad(key);
    auto plaintext = random_bytes(gen, 640);  // 10 chunks
    const auto before = encrypt(plaintext, key, pad);
    plaintext[4 * 8 + 3] ^= 0xA5;  // inside chunk 4
    const auto after = encrypt(plaintext, key, pad);
    for (std::size_t chunk = 0; chunk < 10; ++chunk) {
        const bool same = std::equal(before.body.begin() + chunk * 8,
                                     before.body.begin() + (chunk + 1) * 8,
                                     after.body.begin() + chunk * 8);
        CHECK(same == (chunk != 4));
    }
}

TEST_CASE("decrypt with the wrong key fails fast or garbles") {
    SplitMix64 gen(31337);
    const auto key = make_key(64, 4, ShuffleMode::Unbiased, seed_of(30, 7));
    const auto plaintext = random_bytes(gen, 4096);
    const auto container = encrypt(plaintext, key);

    // wrong seed: fingerprint check rejects before any work
    const auto wrong_seed = make_key(64, 4, ShuffleMode::Unbiased, seed_of(31, 7));
    CHECK_THROWS_AS(decrypt(container, wrong_seed), KeyMismatchError);

    // wrong dimensions
    const auto wrong_n = make_key(128, 4, ShuffleMode::Unbiased, seed_of(30, 7));
    CHECK_THROWS_AS(decrypt(container, wrong_n), KeyMismatchError);

    // forced decryption with the wrong pad must not reproduce the input
    auto forged = container;
    forged.key_fingerprint = seed_fingerprint(wrong_seed.seed);
    CHECK(decrypt(forged, wrong_seed) != plaintext);
}

TEST_CASE("container serialization round-trips; damage is rejected") {
    SplitMix64 gen(404);
    const auto key = make_key(16, 3, ShuffleMode::Paper, seed_of(30, 8));
    const auto plaintext = random_bytes(gen, 33);
    const auto container = encrypt(plaintext, key);
    const auto bytes = serialize_container(container);
    REQUIRE(bytes.size() == kContainerHeaderSize + container.body.size());
    CHECK(parse_container(bytes) == container);

    auto truncated = bytes;
    truncated.resize(bytes.size() - 1);
    CHECK_THROWS_AS(parse_container(truncated), CorruptDataError);

    auto bad_magic = bytes;
    bad_magic[3] = 'X';
    CHECK_THROWS_AS(parse_container(bad_magic), CorruptDataError);

    auto bad_version = bytes;
    bad_version[4] = 0x02;
    CHECK_THROWS_AS(parse_container(bad_version), CorruptDataError);

    auto header_only = std::vector<std::uint8_t>(bytes.begin(), bytes.begin() + 10);
    CHECK_THROWS_AS(parse_container(header_only), CorruptDataError);
}

TEST_CASE("collision positions: zero plaintext collides everywhere") {
    const auto key = make_key(8, 4, ShuffleMode::Unbiased, seed_of(30, 9));
    const std::vector<std::uint8_t> zeros(32, 0);
    const auto container = encrypt(zeros, key);
    const auto hits = collision_positions(zeros, container);
    std::vector<std::uint64_t> all(32);
    std::iota(all.begin(), all.end(), 0u);
    CHECK(hits == all);
}

TEST_CASE("collision positions: moved bit means no collision") {
    const auto key = make_key(8, 1, ShuffleMode::Unbiased, seed_of(30, 10));
    // pad whose only permutation moves bit 1 (source bit 2): chunk 10000000
    // cannot survive
    const Pad pad = Pad::from_permutations(
        {Permutation(std::vector<std::uint32_t>{1, 0, 2, 3, 4, 5, 6, 7})});
    const std::vector<std::uint8_t> plaintext{0b10000000};
    const auto container = encrypt(plaintext, key, pad);
    CHECK(collision_positions(plaintext, container).empty());

    const std::vector<std::uint8_t> longer{1, 2};
    CHECK_THROWS_AS(collision_positions(longer, container), std::invalid_argument);
}

TEST_CASE("random megabyte at n=2048, m=256 has no collisions") {
    SplitMix64 gen(2024);
    const auto key = make_key(2048, 256, ShuffleMode::Unbiased, seed_of(30, 11));
    const auto plaintext = random_bytes(gen, 1 << 20);
    const auto container = encrypt(plaintext, key);
    CHECK(collision_positions(plaintext, container).empty());
    CHECK(decrypt(container, key) == plaintext);
}
