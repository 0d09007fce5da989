#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace qpp {

// CRC-32/ISO-HDLC (the zlib/PNG polynomial, reflected 0xEDB88320).
// crc32("123456789") == 0xCBF43926.
std::uint32_t crc32(std::span<const std::uint8_t> data);

// CRC-64/XZ (reflected 0xC96C5795D7870F42, init and xorout all-ones).
// crc64("123456789") == 0x995DC9BBDF1939FA.
std::uint64_t crc64(std::span<const std::uint8_t> data);

}  // namespace qpp
