#include "qpp/prng.hpp"

#include "qpp/endian.hpp"

namespace qpp {

std::uint64_t stream_seed(const Seed16& seed, std::uint64_t purpose, std::uint64_t index) {
    const std::uint64_t hi = load_be64(seed.data());
    const std::uint64_t lo = load_be64(seed.data() + 8);
    std::uint64_t h = mix64(hi ^ purpose);
    h = mix64(h ^ lo);
    h = mix64(h ^ index);
    return h;
}

}  // namespace qpp
