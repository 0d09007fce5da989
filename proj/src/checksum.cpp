#include "qpp/checksum.hpp"

#include <array>

namespace qpp {
namespace {

constexpr std::array<std::uint32_t, 256> make_crc32_table() {
    std::array<std::uint32_t, 256> table{};
    for (std::uint32_t i = 0; i < 256; ++i) {
        std::uint32_t c = i;
        for (int k = 0; k < 8; ++k) c = (c >> 1) ^ ((c & 1) ? 0xEDB88320u : 0u);
        table[i] = c;
    }
    return table;
}

constexpr std::array<std::uint64_t, 256> make_crc64_table() {
    std::array<std::uint64_t, 256> table{};
    for (std::uint64_t i = 0; i < 256; ++i) {
        std::uint64_t c = i;
        for (int k = 0; k < 8; ++k) c = (c >> 1) ^ ((c & 1) ? 0xC96C5795D7870F42ull : 0u);
        table[i] = c;
    }
    return table;
}

constexpr auto kCrc32Table = make_crc32_table();
constexpr auto kCrc64Table = make_crc64_table();

}  // namespace

std::uint32_t crc32(std::span<const std::uint8_t> data) {
    std::uint32_t c = 0xFFFFFFFFu;
    for (std::uint8_t b : data) c = (c >> 8) ^ kCrc32Table[(c ^ b) & 0xFFu];
    return c ^ 0xFFFFFFFFu;
}

std::uint64_t crc64(std::span<const std::uint8_t> data) {
    std::uint64_t c = ~0ull;
    for (std::uint8_t b : data) c = (c >> 8) ^ kCrc64Table[(c ^ b) & 0xFFu];
    return ~c;
}

}  // namespace qpp
