#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qpp/permutation.hpp"
#include "qpp/prng.hpp"

namespace qpp::analysis {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

// log10 of a positive big integer, accurate to ~1e-15 even when the value
// is far beyond double range (top bits + bit length).
double log10_bigint(const BigInt& v);

// A probability carried in log10 space, with the exact rational alongside
// whenever arbitrary-precision cost is trivial. N! at N = 2048 has ~5895
// digits, so log10 is the only universal currency here.
struct Probability {
    std::optional<BigRational> exact;
    double log10_value = 0.0;  // -inf for probability zero
    bool degenerate = false;   // p == 0 or p == n: every permutation fixes the chunk

    static Probability from_rational(BigRational r, bool degenerate = false);
    static Probability from_log10(double lg);
    static Probability zero();

    double value() const;  // pow(10, log10_value); 0 for -inf
    std::string exact_str() const;  // "5/92", or "" when no exact form
};

// Scenario-1: one matrix drawn from the complete group of n! permutations.
// For 1 <= p <= n-1 the collision probability is 1/C(n,p); p == 0 and
// p == n are reported as probability 1 with the degenerate flag (uniform
// chunks are fixed by every permutation, and they dominate real-image
// leakage despite being excluded from the bound's derivation).
Probability collision_prob_complete(std::uint32_t n, std::uint32_t p);

// Brute-force side of the Scenario-1 counting argument: walks all n!
// permutations and counts the ones fixing the chunk. n <= 10.
BigInt count_fixing_permutations_enumerated(const BitChunk& chunk);

// Closed-form side: p!(n-p)! fixing permutations out of n!.
BigInt count_fixing_permutations_formula(std::uint32_t n, std::uint32_t p);

// Scenario-2 worst case: the probability that every member of a random
// m-subset of the n! permutations fixes a popcount-p chunk,
// C(p!(n-p)!, m) / C(n!, m). Exact rational when n <= 64 and m <= 4096;
// log10 everywhere, term-by-term so no cancellation is hit for huge
// factorials. m > p!(n-p)! pigeonholes to exactly zero.
Probability pad_all_fix_prob(std::uint32_t n, std::uint32_t p, std::uint64_t m);

// Independent enumeration oracle for tiny cases: iterates every m-subset
// of S_n and counts subsets whose members all fix the reference chunk.
// Feasibility guard: C(n!, m) <= 2e6.
Probability pad_all_fix_prob_enumerated(std::uint32_t n, std::uint32_t p, std::uint32_t m);

// The paper-level approximation 1/N^m (valid for m << (N-1)!).
Probability approx_bound_incomplete(std::uint32_t n, std::uint64_t m);

struct RateEstimate {
    double rate = 0.0;
    double std_error = 0.0;  // binomial, sqrt(rate(1-rate)/trials)
    std::uint64_t trials = 0;
    std::uint64_t hits = 0;
};

// Empirical Scenario-1 rate: per trial, a fresh pad of m unbiased
// permutations, a random chunk of popcount p, one scheduled permutation
// applied; reports the fraction of trials where ciphertext == plaintext.
// Expected value 1/C(n,p). Trials are seeded per counter, so the result is
// a pure function of (n, p, m, trials, seed).
RateEstimate monte_carlo_collision_rate(std::uint32_t n, std::uint32_t p, std::uint32_t m,
                                        std::uint64_t trials, const Seed16& seed);

// Empirical Scenario-2 worst case: fraction of freshly sampled pads of m
// *distinct* permutations (matching the binomial-coefficient counting)
// whose every member fixes the canonical popcount-p chunk. Comparable
// against pad_all_fix_prob. Feasible only for small n.
RateEstimate worst_case_pad_rate(std::uint32_t n, std::uint32_t p, std::uint32_t m,
                                 std::uint64_t pad_trials, const Seed16& seed);

struct UniformityReport {
    std::vector<std::uint64_t> counts;  // per permutation, lexicographic (Lehmer) order
    std::uint64_t draws = 0;
    double chi_square = 0.0;
    double p_value = 0.0;
    bool exactly_uniform = false;
};

// Exact output distribution of the shuffle over every admissible keystream
// sequence (N^N for PaperMode, N! for UnbiasedMode). n <= 6.
UniformityReport shuffle_uniformity_exhaustive(std::uint32_t n, ShuffleMode mode);

// Sampled chi-square against uniform, counter-seeded. n <= 8.
UniformityReport shuffle_uniformity_sampled(std::uint32_t n, ShuffleMode mode,
                                            std::uint64_t samples, const Seed16& seed);

// One row of the cryptanalysis report. Scenario-2 fields are present only
// when m is configured; p-dependent fields only when p is configured.
struct CollisionReport {
    std::uint32_t n = 0;
    std::optional<std::uint32_t> p;
    std::optional<std::uint64_t> m;
    std::optional<Probability> complete_group_prob;    // 1/C(n,p)
    Probability bound_1_over_n;                        // Scenario-1 bound
    std::optional<Probability> pad_all_fix;            // C(p!(n-p)!,m)/C(n!,m)
    std::optional<Probability> approx_1_over_n_pow_m;  // 1/n^m
    std::optional<RateEstimate> observed;
};

CollisionReport make_report(std::uint32_t n, std::optional<std::uint32_t> p,
                            std::optional<std::uint64_t> m);

// Line-oriented human-readable rendering.
std::string report_text(const CollisionReport& report);

// Tabular schema: n, p, m, exact_log10, approx_log10, observed_rate,
// trials, stderr. exact_log10 is the sharpest analytic value for the row
// (pad_all_fix when m is set, else 1/C(n,p)); approx_log10 is its
// closed-form approximation (1/n^m when m is set, else the 1/n bound).
// Missing values render as "-".
std::string report_tsv_header();
std::string report_tsv_row(const CollisionReport& report);

}  // namespace qpp::analysis
