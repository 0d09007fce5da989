#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "qpp/cipher.hpp"
#include "qpp/key_schedule.hpp"

namespace qpp::imaging {

// 8-bit raster, grayscale or RGB, row-major. Max sample value is fixed at
// 255 (what the PNM codec reads and writes).
struct RasterImage {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::uint32_t channels = 1;  // 1 = PGM, 3 = PPM
    std::vector<std::uint8_t> pixels;

    std::size_t byte_count() const { return std::size_t(width) * height * channels; }

    friend bool operator==(const RasterImage&, const RasterImage&) = default;
};

// Binary PGM (P5) / PPM (P6) codec, maxval 255 only. The reader accepts
// standard header whitespace and '#' comments; anything else (P1..P4, P7,
// wider maxval) raises UnsupportedFormatError, truncated rasters raise
// CorruptDataError. The writer is bit-exact: one '\n' after the magic and
// the maxval, one ' ' between width and height.
RasterImage parse_pnm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> write_pnm(const RasterImage& img);
RasterImage load_pnm_file(const std::filesystem::path& path);
void write_pnm_file(const RasterImage& img, const std::filesystem::path& path);

// Deterministic 1024x1024 grayscale benchmark: flat quadrants, a glyph
// band of black strokes on white, a sparse dot field, and a smooth
// gradient. Built so leakage numbers are reproducible without third-party
// assets: the dot field carries popcount-1 chunks at n = 64 (the collision
// sweet spot) and the band's white runs are long enough to stay uniform at
// n <= 1024 yet always shorter than 256 bytes, so nothing is uniform at
// n >= 2048.
RasterImage benchmark_image();

// Encrypts the raster bytes with the cipher module, keeping dimensions so
// the output stays viewable. A trailing partial chunk is zero-padded,
// encrypted, and truncated back to raster length for display; decryption
// of the displayed image is therefore bit-exact exactly when the raster
// bit length is a multiple of n (true for every stock configuration) and
// best-effort on the final chunk otherwise.
RasterImage encrypt_image(const RasterImage& img, const PadKey& key, const Pad& pad);
RasterImage encrypt_image(const RasterImage& img, const PadKey& key);
RasterImage decrypt_image(const RasterImage& img, const PadKey& key, const Pad& pad);
RasterImage decrypt_image(const RasterImage& img, const PadKey& key);

// What the eye sees in a cipherimage, quantified. chunk_collision_fraction
// can never drop below uniform_chunk_fraction: uniform chunks are fixed by
// every permutation.
struct ImpressionMetrics {
    std::uint32_t n = 0;
    std::uint32_t m = 0;  // configuration echo; 0 when unknown
    std::uint64_t chunk_count = 0;
    double chunk_collision_fraction = 0.0;
    double uniform_chunk_fraction = 0.0;   // chunks of the original with p == 0 or p == n
    double pixel_equality_fraction = 0.0;  // bytewise original == cipher
};

// Fractions over the n-bit chunks of the two rasters (final partial chunk
// zero-padded on both sides). Throws std::invalid_argument on dimension
// mismatch.
ImpressionMetrics impression_metrics(const RasterImage& original, const RasterImage& cipher,
                                     std::uint32_t n);

struct PanelEntry {
    std::uint32_t n = 0;
    RasterImage cipher;
    ImpressionMetrics metrics;
};

inline constexpr std::array<std::uint32_t, 5> kDefaultPanelDims = {64, 256, 1024, 2048, 8192};

// One cipherimage and one metrics row per dimension, all from the same
// seed, pad size m for every dimension.
std::vector<PanelEntry> figure1_panel(const RasterImage& img,
                                      std::span<const std::uint32_t> dims, std::uint32_t m,
                                      const Seed16& seed);

// The analysis tabular schema extended with the image metric columns.
std::string metrics_tsv_header();
std::string metrics_tsv_row(const ImpressionMetrics& metrics);

}  // namespace qpp::imaging
