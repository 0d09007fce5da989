// _qpp: python bindings over the core operations, for notebooks and the
// smoke tests. Byte strings map onto the same packed MSB-first layout the
// C++ API uses.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "qpp/analysis.hpp"
#include "qpp/cipher.hpp"
#include "qpp/errors.hpp"
#include "qpp/imaging.hpp"
#include "qpp/key_schedule.hpp"

namespace py = pybind11;
using namespace qpp;

namespace {

std::vector<std::uint8_t> to_vec(const py::bytes& b) {
    const std::string_view view = b;
    return {view.begin(), view.end()};
}

py::bytes to_bytes(std::span<const std::uint8_t> v) {
    return py::bytes(reinterpret_cast<const char*>(v.data()), v.size());
}

Seed16 to_seed(const py::bytes& b) {
    const std::string_view view = b;
    if (view.size() != 16) throw std::invalid_argument("seed must be exactly 16 bytes");
    Seed16 seed{};
    std::copy(view.begin(), view.end(), seed.begin());
    return seed;
}

py::object exact_of(const analysis::Probability& prob) {
    if (!prob.exact) return py::none();
    return py::str(prob.exact_str());
}

BitChunk chunk_of(const py::bytes& packed, std::uint32_t n) {
    const auto v = to_vec(packed);
    return BitChunk(n, v);
}

}  // namespace

PYBIND11_MODULE(_qpp, m) {
    m.doc() = "Quantum permutation pad cipher and collision analysis";

    py::register_exception<KeyMismatchError>(m, "KeyMismatchError");
    py::register_exception<CorruptDataError>(m, "CorruptDataError");
    py::register_exception<UnsupportedFormatError>(m, "UnsupportedFormatError");

    py::enum_<ShuffleMode>(m, "ShuffleMode")
        .value("PAPER", ShuffleMode::Paper)
        .value("UNBIASED", ShuffleMode::Unbiased);

    py::class_<PadKey>(m, "PadKey")
        .def_readonly("n", &PadKey::n)
        .def_readonly("m", &PadKey::m)
        .def_readonly("mode", &PadKey::mode)
        .def_property_readonly("seed", [](const PadKey& k) { return to_bytes(k.seed); })
        .def_property_readonly("fingerprint",
                               [](const PadKey& k) { return to_bytes(seed_fingerprint(k.seed)); })
        .def("to_bytes", [](const PadKey& k) { return to_bytes(serialize_key(k)); })
        .def_static("from_bytes", [](const py::bytes& b) { return parse_key(to_vec(b)); })
        .def("__repr__", [](const PadKey& k) {
            std::ostringstream os;
            os << "PadKey(n=" << k.n << ", m=" << k.m << ", mode="
               << (k.mode == ShuffleMode::Paper ? "PAPER" : "UNBIASED") << ")";
            return os.str();
        });

    m.def("keygen", &keygen, py::arg("n"), py::arg("m"),
          py::arg("mode") = ShuffleMode::Unbiased, "Fresh key from system entropy");
    m.def(
        "make_key",
        [](std::uint32_t n, std::uint32_t m, ShuffleMode mode, const py::bytes& seed) {
            return make_key(n, m, mode, to_seed(seed));
        },
        py::arg("n"), py::arg("m"), py::arg("mode"), py::arg("seed"));

    m.def(
        "encrypt",
        [](const PadKey& key, const py::bytes& plaintext) {
            return to_bytes(serialize_container(encrypt(to_vec(plaintext), key)));
        },
        py::arg("key"), py::arg("plaintext"), "Encrypt bytes into a serialized QPPC container");
    m.def(
        "decrypt",
        [](const PadKey& key, const py::bytes& container) {
            return to_bytes(decrypt(parse_container(to_vec(container)), key));
        },
        py::arg("key"), py::arg("container"));
    m.def(
        "collision_positions",
        [](const py::bytes& plaintext, const py::bytes& container) {
            return collision_positions(to_vec(plaintext), parse_container(to_vec(container)));
        },
        py::arg("plaintext"), py::arg("container"),
        "Chunk indices where ciphertext == plaintext");
    m.def(
        "index_for_chunk",
        [](const PadKey& key, std::uint64_t i) { return index_for_chunk(key, i); },
        py::arg("key"), py::arg("chunk_index"));

    m.def(
        "permutation_from_keystream",
        [](std::uint32_t n, const std::vector<std::uint32_t>& k, ShuffleMode mode) {
            const auto perm = generate_from_keystream(n, k, mode);
            return std::vector<std::uint32_t>(perm.map().begin(), perm.map().end());
        },
        py::arg("n"), py::arg("k_values"), py::arg("mode"),
        "Destination->source map from the descending swap loop");
    m.def(
        "apply_permutation",
        [](const std::vector<std::uint32_t>& map, const py::bytes& chunk, std::uint32_t n) {
            const Permutation perm{std::vector<std::uint32_t>(map)};
            return to_bytes(apply(perm, chunk_of(chunk, n)).bytes());
        },
        py::arg("map"), py::arg("chunk"), py::arg("n"));
    m.def("invert_permutation", [](const std::vector<std::uint32_t>& map) {
        const auto inv = invert(Permutation{std::vector<std::uint32_t>(map)});
        return std::vector<std::uint32_t>(inv.map().begin(), inv.map().end());
    });

    py::class_<analysis::Probability>(m, "Probability")
        .def_readonly("log10", &analysis::Probability::log10_value)
        .def_readonly("degenerate", &analysis::Probability::degenerate)
        .def_property_readonly("exact", &exact_of, "Exact value as a 'num/den' string, or None")
        .def("value", &analysis::Probability::value)
        .def("__repr__", [](const analysis::Probability& p) {
            std::ostringstream os;
            os << "Probability(log10=" << p.log10_value;
            if (p.exact) os << ", exact=" << p.exact_str();
            os << ")";
            return os.str();
        });

    py::class_<analysis::RateEstimate>(m, "RateEstimate")
        .def_readonly("rate", &analysis::RateEstimate::rate)
        .def_readonly("std_error", &analysis::RateEstimate::std_error)
        .def_readonly("trials", &analysis::RateEstimate::trials)
        .def_readonly("hits", &analysis::RateEstimate::hits);

    py::class_<analysis::UniformityReport>(m, "UniformityReport")
        .def_readonly("counts", &analysis::UniformityReport::counts)
        .def_readonly("draws", &analysis::UniformityReport::draws)
        .def_readonly("chi_square", &analysis::UniformityReport::chi_square)
        .def_readonly("p_value", &analysis::UniformityReport::p_value)
        .def_readonly("exactly_uniform", &analysis::UniformityReport::exactly_uniform);

    m.def("collision_prob_complete", &analysis::collision_prob_complete, py::arg("n"),
          py::arg("p"));
    m.def("pad_all_fix_prob", &analysis::pad_all_fix_prob, py::arg("n"), py::arg("p"),
          py::arg("m"));
    m.def("pad_all_fix_prob_enumerated", &analysis::pad_all_fix_prob_enumerated, py::arg("n"),
          py::arg("p"), py::arg("m"));
    m.def("approx_bound_incomplete", &analysis::approx_bound_incomplete, py::arg("n"),
          py::arg("m"));
    m.def(
        "count_fixing_permutations",
        [](std::uint32_t n, std::uint32_t p, bool enumerated) {
            analysis::BigInt count;
            if (enumerated) {
                BitChunk chunk(n);
                for (std::uint32_t i = 0; i < p; ++i) chunk.set_bit(i, true);
                count = analysis::count_fixing_permutations_enumerated(chunk);
            } else {
                count = analysis::count_fixing_permutations_formula(n, p);
            }
            return py::module_::import("builtins").attr("int")(count.str());
        },
        py::arg("n"), py::arg("p"), py::arg("enumerated") = false,
        "p!(n-p)! by formula, or by walking all n! permutations");
    m.def(
        "monte_carlo_collision_rate",
        [](std::uint32_t n, std::uint32_t p, std::uint32_t m, std::uint64_t trials,
           const py::bytes& seed) {
            return analysis::monte_carlo_collision_rate(n, p, m, trials, to_seed(seed));
        },
        py::arg("n"), py::arg("p"), py::arg("m"), py::arg("trials"), py::arg("seed"));
    m.def(
        "worst_case_pad_rate",
        [](std::uint32_t n, std::uint32_t p, std::uint32_t m, std::uint64_t pad_trials,
           const py::bytes& seed) {
            return analysis::worst_case_pad_rate(n, p, m, pad_trials, to_seed(seed));
        },
        py::arg("n"), py::arg("p"), py::arg("m"), py::arg("pad_trials"), py::arg("seed"));
    m.def("shuffle_uniformity_exhaustive", &analysis::shuffle_uniformity_exhaustive,
          py::arg("n"), py::arg("mode"));
    m.def(
        "shuffle_uniformity_sampled",
        [](std::uint32_t n, ShuffleMode mode, std::uint64_t samples, const py::bytes& seed) {
            return analysis::shuffle_uniformity_sampled(n, mode, samples, to_seed(seed));
        },
        py::arg("n"), py::arg("mode"), py::arg("samples"), py::arg("seed"));

    py::class_<imaging::RasterImage>(m, "RasterImage")
        .def(py::init([](std::uint32_t width, std::uint32_t height, std::uint32_t channels,
                         const py::bytes& pixels) {
                 imaging::RasterImage img{width, height, channels, to_vec(pixels)};
                 if (img.pixels.size() != img.byte_count())
                     throw std::invalid_argument("pixel buffer does not match dimensions");
                 return img;
             }),
             py::arg("width"), py::arg("height"), py::arg("channels"), py::arg("pixels"))
        .def_readonly("width", &imaging::RasterImage::width)
        .def_readonly("height", &imaging::RasterImage::height)
        .def_readonly("channels", &imaging::RasterImage::channels)
        .def_property_readonly("pixels",
                               [](const imaging::RasterImage& i) { return to_bytes(i.pixels); })
        .def("__eq__", [](const imaging::RasterImage& a, const imaging::RasterImage& b) {
            return a == b;
        });

    py::class_<imaging::ImpressionMetrics>(m, "ImpressionMetrics")
        .def_readonly("n", &imaging::ImpressionMetrics::n)
        .def_readonly("m", &imaging::ImpressionMetrics::m)
        .def_readonly("chunk_count", &imaging::ImpressionMetrics::chunk_count)
        .def_readonly("chunk_collision_fraction",
                      &imaging::ImpressionMetrics::chunk_collision_fraction)
        .def_readonly("uniform_chunk_fraction",
                      &imaging::ImpressionMetrics::uniform_chunk_fraction)
        .def_readonly("pixel_equality_fraction",
                      &imaging::ImpressionMetrics::pixel_equality_fraction);

    m.def("benchmark_image", &imaging::benchmark_image);
    m.def("parse_pnm", [](const py::bytes& b) { return imaging::parse_pnm(to_vec(b)); });
    m.def("write_pnm",
          [](const imaging::RasterImage& img) { return to_bytes(imaging::write_pnm(img)); });
    m.def("encrypt_image",
          [](const imaging::RasterImage& img, const PadKey& key) {
              return imaging::encrypt_image(img, key);
          },
          py::arg("image"), py::arg("key"));
    m.def("decrypt_image",
          [](const imaging::RasterImage& img, const PadKey& key) {
              return imaging::decrypt_image(img, key);
          },
          py::arg("image"), py::arg("key"));
    m.def("impression_metrics", &imaging::impression_metrics, py::arg("original"),
          py::arg("cipher"), py::arg("n"));
    m.def(
        "figure1_metrics",
        [](const imaging::RasterImage& img, const std::vector<std::uint32_t>& dims,
           std::uint32_t m_matrices, const py::bytes& seed) {
            const auto panel = imaging::figure1_panel(img, dims, m_matrices, to_seed(seed));
            std::vector<imaging::ImpressionMetrics> out;
            out.reserve(panel.size());
            for (const auto& entry : panel) out.push_back(entry.metrics);
            return out;
        },
        py::arg("image"), py::arg("dims"), py::arg("m"), py::arg("seed"),
        "Impression metrics per dimension, one pass of the figure-1 pipeline");
}
