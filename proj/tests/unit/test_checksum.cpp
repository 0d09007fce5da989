#include "doctest.h"

#include <string_view>

#include "qpp/checksum.hpp"

namespace {

std::span<const std::uint8_t> bytes_of(std::string_view s) {
    return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

}  // namespace

TEST_CASE("crc32 matches the ISO-HDLC check value") {
    CHECK(qpp::crc32(bytes_of("123456789")) == 0xCBF43926u);
    CHECK(qpp::crc32({}) == 0x00000000u);
}

TEST_CASE("crc64 matches the CRC-64/XZ check value") {
    CHECK(qpp::crc64(bytes_of("123456789")) == 0x995DC9BBDF1939FAull);
    CHECK(qpp::crc64({}) == 0ull);
}
