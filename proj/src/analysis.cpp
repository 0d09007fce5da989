#include "qpp/analysis.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "qpp/key_schedule.hpp"

namespace qpp::analysis {
namespace {

constexpr double kLn10 = 2.302585092994045684;
constexpr double kLog10Of2 = 0.301029995663981195;

double log10_factorial(std::uint64_t x) { return std::lgamma(double(x) + 1.0) / kLn10; }

BigInt big_factorial(std::uint32_t x) {
    if (x > 20000) throw std::invalid_argument("factorial: argument too large for exact path");
    BigInt r = 1;
    for (std::uint32_t i = 2; i <= x; ++i) r *= i;
    return r;
}

// C(x, k) for big x, iterative so every division is exact.
BigInt big_binomial(const BigInt& x, std::uint64_t k) {
    if (k > x) return 0;
    BigInt r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r *= x - BigInt(k - i);
        r /= i;
    }
    return r;
}

// log10 of the falling product x(x-1)...(x-m+1). Once x clears 2^200 the
// -i corrections sit ~60 orders of magnitude below double resolution, so a
// single log gets multiplied out; below that, term by term exactly.
double log10_falling_product(const BigInt& x, std::uint64_t m) {
    if (x > BigInt(1) << 200) return double(m) * log10_bigint(x);
    double s = 0.0;
    for (std::uint64_t i = 0; i < m; ++i) s += log10_bigint(x - BigInt(i));
    return s;
}

std::uint64_t factorial_u64(std::uint32_t x) {
    std::uint64_t r = 1;
    for (std::uint32_t i = 2; i <= x; ++i) r *= i;  // caller guards x <= 20
    return r;
}

// Lexicographic rank of a permutation map (Lehmer code).
std::uint64_t lehmer_rank(std::span<const std::uint32_t> map) {
    const std::uint32_t n = std::uint32_t(map.size());
    std::uint64_t rank = 0;
    for (std::uint32_t i = 0; i < n; ++i) {
        std::uint32_t smaller_after = 0;
        for (std::uint32_t j = i + 1; j < n; ++j)
            if (map[j] < map[i]) ++smaller_after;
        rank += smaller_after * factorial_u64(n - 1 - i);
    }
    return rank;
}

bool map_fixes(std::span<const std::uint32_t> map, const std::vector<std::uint8_t>& bits) {
    auto bit = [&](std::uint32_t i) { return (bits[i >> 3] >> (7 - (i & 7))) & 1u; };
    for (std::uint32_t j = 0; j < map.size(); ++j)
        if (bit(map[j]) != bit(j)) return false;
    return true;
}

// Canonical popcount-p chunk: the first p bits set.
std::vector<std::uint8_t> reference_chunk_bits(std::uint32_t n, std::uint32_t p) {
    std::vector<std::uint8_t> bits((n + 7) / 8, 0);
    for (std::uint32_t i = 0; i < p; ++i) bits[i >> 3] |= std::uint8_t(0x80u >> (i & 7));
    return bits;
}

UniformityReport finish_uniformity(std::vector<std::uint64_t> counts, std::uint64_t draws) {
    UniformityReport report;
    report.draws = draws;
    const double expected = double(draws) / double(counts.size());
    double chi2 = 0.0;
    for (std::uint64_t c : counts) {
        const double d = double(c) - expected;
        chi2 += d * d / expected;
    }
    report.chi_square = chi2;
    boost::math::chi_squared dist(double(counts.size()) - 1.0);
    report.p_value = boost::math::cdf(boost::math::complement(dist, chi2));
    report.exactly_uniform =
        *std::min_element(counts.begin(), counts.end()) ==
        *std::max_element(counts.begin(), counts.end());
    report.counts = std::move(counts);
    return report;
}

std::string fmt(const char* format, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, format, v);
    return buf;
}

}  // namespace

double log10_bigint(const BigInt& v) {
    if (v <= 0) throw std::invalid_argument("log10_bigint: argument must be positive");
    const std::size_t bits = boost::multiprecision::msb(v);  // floor(log2 v)
    if (bits < 64) return std::log10(v.convert_to<double>());
    const unsigned shift = unsigned(bits + 1 - 64);
    const BigInt top = v >> shift;
    return std::log10(top.convert_to<double>()) + double(shift) * kLog10Of2;
}

Probability Probability::from_rational(BigRational r, bool degenerate) {
    Probability prob;
    prob.degenerate = degenerate;
    if (r == 0) {
        prob.exact = std::move(r);
        prob.log10_value = -std::numeric_limits<double>::infinity();
        return prob;
    }
    prob.log10_value =
        log10_bigint(boost::multiprecision::numerator(r)) -
        log10_bigint(boost::multiprecision::denominator(r));
    prob.exact = std::move(r);
    return prob;
}

Probability Probability::from_log10(double lg) {
    Probability prob;
    prob.log10_value = lg;
    return prob;
}

Probability Probability::zero() { return from_rational(BigRational(0)); }

double Probability::value() const {
    if (log10_value < -300.0) return 0.0;
    return std::pow(10.0, log10_value);
}

std::string Probability::exact_str() const {
    if (!exact) return "";
    std::ostringstream os;
    os << *exact;
    return os.str();
}

Probability collision_prob_complete(std::uint32_t n, std::uint32_t p) {
    if (n < 2) throw std::invalid_argument("collision_prob_complete: n must be >= 2");
    if (p > n) throw std::invalid_argument("collision_prob_complete: p must be in [0, n]");
    if (p == 0 || p == n) return Probability::from_rational(BigRational(1), true);

    // 1/C(n,p): exact rational when the binomial is cheap, log10 always.
    const std::uint32_t small_side = std::min(p, n - p);
    if (small_side <= 64 || n <= 64) {
        BigRational r(BigInt(1), big_binomial(BigInt(n), small_side));
        return Probability::from_rational(std::move(r));
    }
    const double lg =
        log10_factorial(p) + log10_factorial(n - p) - log10_factorial(n);
    return Probability::from_log10(lg);
}

BigInt count_fixing_permutations_enumerated(const BitChunk& chunk) {
    const std::uint32_t n = chunk.n();
    if (n > 10)
        throw std::invalid_argument("count_fixing_permutations_enumerated: n > 10 infeasible");
    std::vector<std::uint8_t> bits(chunk.bytes().begin(), chunk.bytes().end());
    std::vector<std::uint32_t> map(n);
    std::iota(map.begin(), map.end(), 0u);
    BigInt count = 0;
    do {
        if (map_fixes(map, bits)) ++count;
    } while (std::next_permutation(map.begin(), map.end()));
    return count;
}

BigInt count_fixing_permutations_formula(std::uint32_t n, std::uint32_t p) {
    if (p > n) throw std::invalid_argument("count_fixing_permutations_formula: p > n");
    return big_factorial(p) * big_factorial(n - p);
}

Probability pad_all_fix_prob(std::uint32_t n, std::uint32_t p, std::uint64_t m) {
    if (n < 2) throw std::invalid_argument("pad_all_fix_prob: n must be >= 2");
    if (p > n) throw std::invalid_argument("pad_all_fix_prob: p must be in [0, n]");
    if (m < 1) throw std::invalid_argument("pad_all_fix_prob: m must be >= 1");
    if (p == 0 || p == n) return Probability::from_rational(BigRational(1), true);

    if (n <= 16384) {
        const BigInt fixing = big_factorial(p) * big_factorial(n - p);
        if (BigInt(m) > fixing) return Probability::zero();  // pigeonhole
        const BigInt total = big_factorial(n);
        if (n <= 64 && m <= 4096) {
            BigRational r(big_binomial(fixing, m), big_binomial(total, m));
            return Probability::from_rational(std::move(r));
        }
        return Probability::from_log10(log10_falling_product(fixing, m) -
                                       log10_falling_product(total, m));
    }
    // Factorials beyond the exact-integer budget: every -i correction is
    // immeasurably small, the ratio collapses to m * log10(f / n!).
    const double lf = log10_factorial(p) + log10_factorial(n - p);
    return Probability::from_log10(double(m) * (lf - log10_factorial(n)));
}

Probability pad_all_fix_prob_enumerated(std::uint32_t n, std::uint32_t p, std::uint32_t m) {
    if (n < 2 || n > 6)
        throw std::invalid_argument("pad_all_fix_prob_enumerated: n must be in [2, 6]");
    if (p > n) throw std::invalid_argument("pad_all_fix_prob_enumerated: p must be in [0, n]");
    if (p == 0 || p == n) return Probability::from_rational(BigRational(1), true);
    const std::uint64_t group = factorial_u64(n);
    if (m < 1 || m > group)
        throw std::invalid_argument("pad_all_fix_prob_enumerated: m out of range");
    const BigInt subsets = big_binomial(BigInt(group), m);
    if (subsets > 2000000)
        throw std::invalid_argument(
            "pad_all_fix_prob_enumerated: C(n!, m) too large; use pad_all_fix_prob");

    // Fixing flag for every member of S_n, in lexicographic order.
    const auto bits = reference_chunk_bits(n, p);
    std::vector<std::uint32_t> map(n);
    std::iota(map.begin(), map.end(), 0u);
    std::vector<std::uint8_t> fixing;
    fixing.reserve(group);
    do {
        fixing.push_back(map_fixes(map, bits) ? 1 : 0);
    } while (std::next_permutation(map.begin(), map.end()));

    // Walk every m-combination of the group, counting all-fixing pads.
    std::vector<std::uint32_t> combo(m);
    std::iota(combo.begin(), combo.end(), 0u);
    BigInt all_fix = 0;
    for (;;) {
        bool all = true;
        for (std::uint32_t idx : combo)
            if (!fixing[idx]) { all = false; break; }
        if (all) ++all_fix;
        // next combination in lexicographic order
        std::int64_t i = std::int64_t(m) - 1;
        while (i >= 0 && combo[std::size_t(i)] == group - m + std::uint64_t(i)) --i;
        if (i < 0) break;
        ++combo[std::size_t(i)];
        for (std::size_t j = std::size_t(i) + 1; j < m; ++j) combo[j] = combo[j - 1] + 1;
    }
    return Probability::from_rational(BigRational(all_fix, subsets));
}

Probability approx_bound_incomplete(std::uint32_t n, std::uint64_t m) {
    if (n < 2) throw std::invalid_argument("approx_bound_incomplete: n must be >= 2");
    if (m < 1) throw std::invalid_argument("approx_bound_incomplete: m must be >= 1");
    if (m <= 8192) {
        BigInt den = boost::multiprecision::pow(BigInt(n), unsigned(m));
        return Probability::from_rational(BigRational(BigInt(1), std::move(den)));
    }
    return Probability::from_log10(-double(m) * std::log10(double(n)));
}

RateEstimate monte_carlo_collision_rate(std::uint32_t n, std::uint32_t p, std::uint32_t m,
                                        std::uint64_t trials, const Seed16& seed) {
    if (n < 2 || p > n || m < 1 || trials < 1)
        throw std::invalid_argument("monte_carlo_collision_rate: bad configuration");

    std::vector<std::vector<std::uint32_t>> pad(m, std::vector<std::uint32_t>(n));
    std::vector<std::uint32_t> k_scratch(n);
    std::vector<std::uint32_t> positions(n);
    std::vector<std::uint8_t> bits((n + 7) / 8);

    std::uint64_t hits = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        SplitMix64 stream(stream_seed(seed, purpose::kTrial, t));
        // Fresh pad of m unbiased permutations, then a random popcount-p
        // chunk, then the scheduled index. Fixed draw order keeps the run
        // a pure function of the seed.
        for (std::uint32_t j = 0; j < m; ++j)
            draw_permutation_map(pad[j], k_scratch, stream, ShuffleMode::Unbiased);
        std::iota(positions.begin(), positions.end(), 0u);
        std::fill(bits.begin(), bits.end(), 0);
        for (std::uint32_t i = 0; i < p; ++i) {
            const std::uint32_t j = i + std::uint32_t(stream.below(n - i));
            std::swap(positions[i], positions[j]);
            bits[positions[i] >> 3] |= std::uint8_t(0x80u >> (positions[i] & 7));
        }
        const std::uint32_t scheduled = std::uint32_t(stream.below(m));
        if (map_fixes(pad[scheduled], bits)) ++hits;
    }

    RateEstimate est;
    est.trials = trials;
    est.hits = hits;
    est.rate = double(hits) / double(trials);
    est.std_error = std::sqrt(est.rate * (1.0 - est.rate) / double(trials));
    return est;
}

RateEstimate worst_case_pad_rate(std::uint32_t n, std::uint32_t p, std::uint32_t m,
                                 std::uint64_t pad_trials, const Seed16& seed) {
    if (n < 2 || n > 16 || p > n || m < 1 || pad_trials < 1)
        throw std::invalid_argument("worst_case_pad_rate: bad configuration");
    if (n <= 20 && std::uint64_t(m) > factorial_u64(n))
        throw std::invalid_argument("worst_case_pad_rate: m exceeds n!, no distinct pad exists");

    const auto bits = reference_chunk_bits(n, p);
    std::vector<std::vector<std::uint32_t>> pad(m, std::vector<std::uint32_t>(n));
    std::vector<std::uint32_t> k_scratch(n);

    std::uint64_t hits = 0;
    for (std::uint64_t t = 0; t < pad_trials; ++t) {
        SplitMix64 stream(stream_seed(seed, purpose::kPadTrial, t));
        // m *distinct* permutations: duplicates are redrawn, which samples
        // uniformly over m-subsets -- the counting the formula assumes.
        for (std::uint32_t j = 0; j < m; ++j) {
            for (;;) {
                draw_permutation_map(pad[j], k_scratch, stream, ShuffleMode::Unbiased);
                bool duplicate = false;
                for (std::uint32_t prev = 0; prev < j && !duplicate; ++prev)
                    duplicate = pad[prev] == pad[j];
                if (!duplicate) break;
            }
        }
        bool all = true;
        for (std::uint32_t j = 0; j < m && all; ++j) all = map_fixes(pad[j], bits);
        if (all) ++hits;
    }

    RateEstimate est;
    est.trials = pad_trials;
    est.hits = hits;
    est.rate = double(hits) / double(pad_trials);
    est.std_error = std::sqrt(est.rate * (1.0 - est.rate) / double(pad_trials));
    return est;
}

UniformityReport shuffle_uniformity_exhaustive(std::uint32_t n, ShuffleMode mode) {
    if (n < 2 || n > 6)
        throw std::invalid_argument("shuffle_uniformity_exhaustive: n must be in [2, 6]");
    const std::uint64_t group = factorial_u64(n);
    std::vector<std::uint64_t> counts(group, 0);

    // Odometer over every admissible K sequence.
    std::vector<std::uint32_t> k(n, 1);
    auto cap = [&](std::uint32_t i) { return mode == ShuffleMode::Paper ? n : i + 1; };
    std::vector<std::uint32_t> map(n);
    std::uint64_t draws = 0;
    for (;;) {
        std::iota(map.begin(), map.end(), 0u);
        for (std::uint32_t i = n; i-- > 0;) std::swap(map[k[i] - 1], map[i]);
        ++counts[lehmer_rank(map)];
        ++draws;
        std::uint32_t i = 0;
        while (i < n && k[i] == cap(i)) k[i++] = 1;
        if (i == n) break;
        ++k[i];
    }
    return finish_uniformity(std::move(counts), draws);
}

UniformityReport shuffle_uniformity_sampled(std::uint32_t n, ShuffleMode mode,
                                            std::uint64_t samples, const Seed16& seed) {
    if (n < 2 || n > 8)
        throw std::invalid_argument("shuffle_uniformity_sampled: n must be in [2, 8]");
    if (samples < 1) throw std::invalid_argument("shuffle_uniformity_sampled: samples >= 1");
    std::vector<std::uint64_t> counts(factorial_u64(n), 0);
    std::vector<std::uint32_t> map(n);
    std::vector<std::uint32_t> k_scratch(n);
    for (std::uint64_t t = 0; t < samples; ++t) {
        SplitMix64 stream(stream_seed(seed, purpose::kSample, t));
        draw_permutation_map(map, k_scratch, stream, mode);
        ++counts[lehmer_rank(map)];
    }
    return finish_uniformity(std::move(counts), samples);
}

CollisionReport make_report(std::uint32_t n, std::optional<std::uint32_t> p,
                            std::optional<std::uint64_t> m) {
    CollisionReport report;
    report.n = n;
    report.p = p;
    report.m = m;
    report.bound_1_over_n = Probability::from_rational(BigRational(1, n));
    if (p) report.complete_group_prob = collision_prob_complete(n, *p);
    if (m) {
        report.approx_1_over_n_pow_m = approx_bound_incomplete(n, *m);
        if (p) report.pad_all_fix = pad_all_fix_prob(n, *p, *m);
    }
    return report;
}

namespace {

std::string describe(const Probability& prob) {
    std::string s;
    if (std::isinf(prob.log10_value)) {
        s = "0 (impossible)";
    } else {
        s = fmt("%.9g", prob.value());
        s += " (log10 " + fmt("%.6f", prob.log10_value) + ")";
    }
    const std::string exact = prob.exact_str();
    if (!exact.empty() && exact.size() <= 40) s += " = " + exact;
    if (prob.degenerate) s += " [degenerate: uniform chunk, fixed by every matrix]";
    return s;
}

}  // namespace

std::string report_text(const CollisionReport& report) {
    std::ostringstream os;
    os << "collision report: n=" << report.n;
    if (report.p) os << " p=" << *report.p;
    if (report.m) os << " m=" << *report.m;
    os << "\n";
    if (report.complete_group_prob)
        os << "  P[collision | complete group] = " << describe(*report.complete_group_prob)
           << "\n";
    os << "  bound 1/N                     = " << describe(report.bound_1_over_n)
       << "  [below 0.025%: " << (report.bound_1_over_n.value() < 0.00025 ? "yes" : "no")
       << "]\n";
    if (report.pad_all_fix)
        os << "  P[all m matrices fix chunk]   = " << describe(*report.pad_all_fix) << "\n";
    if (report.approx_1_over_n_pow_m)
        os << "  approx 1/N^m                  = " << describe(*report.approx_1_over_n_pow_m)
           << "\n";
    if (report.observed) {
        const auto& o = *report.observed;
        os << "  observed rate                 = " << fmt("%.9g", o.rate) << " +/- "
           << fmt("%.3g", o.std_error) << " (trials=" << o.trials << ", hits=" << o.hits
           << ")\n";
    }
    return os.str();
}

std::string report_tsv_header() {
    return "n\tp\tm\texact_log10\tapprox_log10\tobserved_rate\ttrials\tstderr";
}

std::string report_tsv_row(const CollisionReport& report) {
    std::ostringstream os;
    os << report.n << '\t';
    if (report.p) os << *report.p;
    else os << '-';
    os << '\t';
    if (report.m) os << *report.m;
    else os << '-';
    os << '\t';
    const Probability* sharp =
        report.pad_all_fix ? &*report.pad_all_fix
                           : (report.complete_group_prob ? &*report.complete_group_prob : nullptr);
    os << (sharp ? fmt("%.9f", sharp->log10_value) : "-") << '\t';
    const Probability* approx =
        report.approx_1_over_n_pow_m ? &*report.approx_1_over_n_pow_m : &report.bound_1_over_n;
    os << fmt("%.9f", approx->log10_value) << '\t';
    if (report.observed) {
        const auto& o = *report.observed;
        os << fmt("%.9g", o.rate) << '\t' << o.trials << '\t' << fmt("%.9g", o.std_error);
    } else {
        os << "-\t-\t-";
    }
    return os.str();
}

}  // namespace qpp::analysis
