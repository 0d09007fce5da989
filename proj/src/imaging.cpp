#include "qpp/imaging.hpp"

#include <bit>
#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "qpp/errors.hpp"

namespace qpp::imaging {
namespace {

// Header token reader: skips whitespace and '#' comments, accumulates
// decimal digits.
struct PnmCursor {
    std::span<const std::uint8_t> data;
    std::size_t pos = 0;

    int peek() const { return pos < data.size() ? data[pos] : -1; }
    int get() { return pos < data.size() ? data[pos++] : -1; }

    void skip_space_and_comments() {
        for (;;) {
            while (pos < data.size() && std::isspace(peek())) ++pos;
            if (peek() == '#') {
                while (pos < data.size() && get() != '\n') {
                }
                continue;
            }
            return;
        }
    }

    std::uint64_t read_uint(const char* what) {
        skip_space_and_comments();
        if (!std::isdigit(peek()))
            throw CorruptDataError(std::string("pnm: malformed header, expected ") + what);
        std::uint64_t v = 0;
        while (std::isdigit(peek())) {
            v = v * 10 + std::uint64_t(get() - '0');
            if (v > 0xFFFFFFFFull) throw CorruptDataError("pnm: header value out of range");
        }
        return v;
    }
};

}  // namespace

RasterImage parse_pnm(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2) throw CorruptDataError("pnm: truncated header");
    if (bytes[0] != 'P') throw UnsupportedFormatError("pnm: not a PNM file");
    const char kind = char(bytes[1]);
    if (kind != '5' && kind != '6')
        throw UnsupportedFormatError(std::string("pnm: only binary P5/P6 supported, got P") +
                                     kind);
    PnmCursor cur{bytes, 2};
    RasterImage img;
    img.width = std::uint32_t(cur.read_uint("width"));
    img.height = std::uint32_t(cur.read_uint("height"));
    img.channels = kind == '5' ? 1 : 3;
    const std::uint64_t maxval = cur.read_uint("maxval");
    if (maxval != 255)
        throw UnsupportedFormatError("pnm: unsupported max value " + std::to_string(maxval) +
                                     " (only 255)");
    if (img.width == 0 || img.height == 0) throw CorruptDataError("pnm: zero dimension");
    // exactly one whitespace byte separates the header from the raster
    const int sep = cur.get();
    if (sep < 0 || !std::isspace(sep)) throw CorruptDataError("pnm: missing raster separator");
    const std::size_t need = img.byte_count();
    if (bytes.size() - cur.pos < need)
        throw CorruptDataError("pnm: truncated raster (have " +
                               std::to_string(bytes.size() - cur.pos) + " bytes, need " +
                               std::to_string(need) + ")");
    img.pixels.assign(bytes.begin() + std::ptrdiff_t(cur.pos),
                      bytes.begin() + std::ptrdiff_t(cur.pos + need));
    return img;
}

std::vector<std::uint8_t> write_pnm(const RasterImage& img) {
    if (img.channels != 1 && img.channels != 3)
        throw std::invalid_argument("pnm: channels must be 1 or 3");
    if (img.pixels.size() != img.byte_count())
        throw std::invalid_argument("pnm: pixel buffer does not match dimensions");
    char header[64];
    const int len = std::snprintf(header, sizeof header, "P%c\n%u %u\n255\n",
                                  img.channels == 1 ? '5' : '6', img.width, img.height);
    std::vector<std::uint8_t> out;
    out.reserve(std::size_t(len) + img.pixels.size());
    out.insert(out.end(), header, header + len);
    out.insert(out.end(), img.pixels.begin(), img.pixels.end());
    return out;
}

RasterImage load_pnm_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failure on " + path.string());
    return parse_pnm(bytes);
}

void write_pnm_file(const RasterImage& img, const std::filesystem::path& path) {
    const auto bytes = write_pnm(img);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
    if (!out) throw IoError("write failure on " + path.string());
}

RasterImage benchmark_image() {
    constexpr std::uint32_t kSize = 1024;
    RasterImage img;
    img.width = kSize;
    img.height = kSize;
    img.channels = 1;
    img.pixels.resize(std::size_t(kSize) * kSize);

    for (std::uint32_t y = 0; y < kSize; ++y) {
        std::uint8_t* row = img.pixels.data() + std::size_t(y) * kSize;
        for (std::uint32_t x = 0; x < kSize; ++x) {
            std::uint8_t v;
            if (y >= 448 && y < 544) {
                // glyph band: black strokes on white; the longest white run
                // is 140 bytes -- uniform chunks up to n = 1024, none at 2048
                const std::uint32_t t = x % 192;
                v = (t < 16 || (t >= 48 && t < 52)) ? 0x00 : 0xFF;
            } else if (y >= 544 && y < 576) {
                // dot field: one set bit per 16 bytes; at n = 64 every other
                // chunk has popcount 1, the collision sweet spot
                v = (x % 16 == 8) ? 0x10 : 0x00;
            } else if (y < 512) {
                v = (x < 512) ? 0x30 : 0xB4;  // upper flat quadrants
            } else if (x < 512) {
                v = std::uint8_t(x >> 1);  // smooth gradient
            } else {
                v = 0x6C;  // lower flat quadrant
            }
            row[x] = v;
        }
    }
    return img;
}

RasterImage encrypt_image(const RasterImage& img, const PadKey& key, const Pad& pad) {
    const CiphertextContainer container = encrypt(img.pixels, key, pad);
    RasterImage out = img;
    std::memcpy(out.pixels.data(), container.body.data(), out.pixels.size());
    return out;
}

RasterImage encrypt_image(const RasterImage& img, const PadKey& key) {
    return encrypt_image(img, key, derive_pad(key));
}

RasterImage decrypt_image(const RasterImage& img, const PadKey& key, const Pad& pad) {
    CiphertextContainer container;
    container.n = key.n;
    container.m = key.m;
    container.plaintext_bits = std::uint64_t(img.pixels.size()) * 8;
    container.key_fingerprint = seed_fingerprint(key.seed);
    const std::uint64_t padded = container.chunk_count() * (key.n / 8);
    container.body = img.pixels;
    container.body.resize(padded, 0);  // lost display bits of a partial tail, if any
    const auto plain = decrypt(container, key, pad);
    RasterImage out = img;
    std::copy(plain.begin(), plain.end(), out.pixels.begin());
    return out;
}

RasterImage decrypt_image(const RasterImage& img, const PadKey& key) {
    return decrypt_image(img, key, derive_pad(key));
}

ImpressionMetrics impression_metrics(const RasterImage& original, const RasterImage& cipher,
                                     std::uint32_t n) {
    if (original.width != cipher.width || original.height != cipher.height ||
        original.channels != cipher.channels)
        throw std::invalid_argument("impression_metrics: image dimensions differ");
    if (n < 8 || n % 8 != 0)
        throw std::invalid_argument("impression_metrics: n must be a multiple of 8");

    const std::size_t total = original.pixels.size();
    const std::uint32_t stride = n / 8;
    const std::uint64_t chunks = (std::uint64_t(total) * 8 + n - 1) / n;

    ImpressionMetrics metrics;
    metrics.n = n;
    metrics.chunk_count = chunks;

    std::uint64_t collisions = 0, uniform = 0, equal_bytes = 0;
    std::vector<std::uint8_t> pt(stride), ct(stride);
    for (std::uint64_t i = 0; i < chunks; ++i) {
        const std::size_t off = std::size_t(i) * stride;
        const std::size_t len = std::min<std::size_t>(stride, total - off);
        const std::uint8_t* a = original.pixels.data() + off;
        const std::uint8_t* b = cipher.pixels.data() + off;
        if (len < stride) {  // trailing partial chunk, zero-padded on both sides
            std::fill(pt.begin(), pt.end(), 0);
            std::fill(ct.begin(), ct.end(), 0);
            std::memcpy(pt.data(), a, len);
            std::memcpy(ct.data(), b, len);
            a = pt.data();
            b = ct.data();
        }
        if (std::memcmp(a, b, stride) == 0) ++collisions;
        std::uint32_t ones = 0;
        for (std::uint32_t j = 0; j < stride; ++j) ones += std::uint32_t(std::popcount(a[j]));
        if (ones == 0 || ones == n) ++uniform;
    }
    for (std::size_t i = 0; i < total; ++i)
        if (original.pixels[i] == cipher.pixels[i]) ++equal_bytes;

    metrics.chunk_collision_fraction = double(collisions) / double(chunks);
    metrics.uniform_chunk_fraction = double(uniform) / double(chunks);
    metrics.pixel_equality_fraction = double(equal_bytes) / double(total);
    return metrics;
}

std::vector<PanelEntry> figure1_panel(const RasterImage& img,
                                      std::span<const std::uint32_t> dims, std::uint32_t m,
                                      const Seed16& seed) {
    std::vector<PanelEntry> panel;
    panel.reserve(dims.size());
    for (std::uint32_t n : dims) {
        const PadKey key = make_key(n, m, ShuffleMode::Unbiased, seed);
        PanelEntry entry;
        entry.n = n;
        entry.cipher = encrypt_image(img, key);
        entry.metrics = impression_metrics(img, entry.cipher, n);
        entry.metrics.m = m;
        panel.push_back(std::move(entry));
    }
    return panel;
}

std::string metrics_tsv_header() {
    return "n\tp\tm\texact_log10\tapprox_log10\tobserved_rate\ttrials\tstderr"
           "\tchunk_collision_fraction\tuniform_chunk_fraction\tpixel_equality_fraction";
}

std::string metrics_tsv_row(const ImpressionMetrics& metrics) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%u\t-\t%u\t-\t-\t%.9g\t%llu\t-\t%.9g\t%.9g\t%.9g",
                  metrics.n, metrics.m, metrics.chunk_collision_fraction,
                  static_cast<unsigned long long>(metrics.chunk_count),
                  metrics.chunk_collision_fraction, metrics.uniform_chunk_fraction,
                  metrics.pixel_equality_fraction);
    return buf;
}

}  // namespace qpp::imaging
