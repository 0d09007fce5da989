#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "qpp/analysis.hpp"
#include "test_support.hpp"

using namespace qpp;
using namespace qpp::analysis;
using qpp::test::seed_of;

namespace {

double choose(std::uint32_t n, std::uint32_t k) {
    double r = 1;
    for (std::uint32_t i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
    return r;
}

}  // namespace

TEST_CASE("collision_prob_complete: paper number at n=4096") {
    const auto prob = collision_prob_complete(4096, 1);
    REQUIRE(prob.exact.has_value());
    CHECK(*prob.exact == BigRational(1, 4096));
    CHECK(prob.value() == doctest::Approx(1.0 / 4096).epsilon(1e-12));
    CHECK(prob.value() < 0.00025);  // the "less than 0.025%" observation
}

TEST_CASE("collision_prob_complete: degenerate and small cases") {
    const auto zero_chunk = collision_prob_complete(4, 0);
    CHECK(zero_chunk.degenerate);
    CHECK(*zero_chunk.exact == BigRational(1));
    CHECK(zero_chunk.log10_value == 0.0);
    CHECK(collision_prob_complete(4, 4).degenerate);

    const auto middle = collision_prob_complete(4, 2);
    CHECK(*middle.exact == BigRational(1, 6));

    CHECK_THROWS_AS(collision_prob_complete(4, 5), std::invalid_argument);
    CHECK_THROWS_AS(collision_prob_complete(1, 0), std::invalid_argument);
}

TEST_CASE("collision_prob_complete agrees with the enumeration oracle at n=4") {
    // 4 of the 24 permutations fix 0011
    const auto counted = count_fixing_permutations_enumerated(BitChunk::from_bits({0, 0, 1, 1}));
    CHECK(counted == 4);
    const auto prob = collision_prob_complete(4, 2);
    CHECK(*prob.exact == BigRational(counted, 24));
}

TEST_CASE("count_fixing_permutations: enumeration matches p!(n-p)!") {
    CHECK(count_fixing_permutations_enumerated(BitChunk::from_bits({0, 0, 0, 0})) == 24);
    CHECK(count_fixing_permutations_enumerated(BitChunk::from_bits({0, 1})) == 1);
    CHECK(count_fixing_permutations_formula(4, 0) == 24);
    CHECK(count_fixing_permutations_formula(4, 2) == 4);

    // the count depends only on the popcount, not on which bits are set
    const auto scattered = count_fixing_permutations_enumerated(
        BitChunk::from_bits({1, 0, 0, 1, 0, 1, 0, 0}));
    CHECK(scattered == count_fixing_permutations_formula(8, 3));

    BitChunk too_big(11);
    CHECK_THROWS_AS(count_fixing_permutations_enumerated(too_big), std::invalid_argument);
}

TEST_CASE("probability log10 agrees with the exact rational to 12 digits") {
    for (auto [n, p] : {std::pair{8u, 3u}, {64u, 7u}, {4096u, 1u}, {4096u, 4095u}}) {
        const auto prob = collision_prob_complete(n, p);
        REQUIRE(prob.exact.has_value());
        const double direct = prob.exact->convert_to<double>();
        CHECK(std::abs(prob.log10_value - std::log10(direct)) <
              1e-12 * std::max(1.0, std::abs(prob.log10_value)));
    }
}

TEST_CASE("pad_all_fix_prob: exact 5/92 and the pigeonhole zero") {
    const auto prob = pad_all_fix_prob(4, 1, 2);
    REQUIRE(prob.exact.has_value());
    CHECK(*prob.exact == BigRational(5, 92));

    const auto impossible = pad_all_fix_prob(4, 1, 7);  // only 6 fixing matrices
    REQUIRE(impossible.exact.has_value());
    CHECK(*impossible.exact == 0);
    CHECK(std::isinf(impossible.log10_value));

    CHECK(pad_all_fix_prob(4, 0, 3).degenerate);
    CHECK_THROWS_AS(pad_all_fix_prob(4, 1, 0), std::invalid_argument);
}

TEST_CASE("pad_all_fix_prob_enumerated verifies the 276-pad count") {
    const auto enumerated = pad_all_fix_prob_enumerated(4, 1, 2);
    REQUIRE(enumerated.exact.has_value());
    CHECK(*enumerated.exact == BigRational(5, 92));
    // matches the closed form bucket by bucket
    CHECK(*enumerated.exact == *pad_all_fix_prob(4, 1, 2).exact);
    CHECK_THROWS_AS(pad_all_fix_prob_enumerated(6, 1, 5), std::invalid_argument);  // too many pads
}

TEST_CASE("pad_all_fix_prob tracks 1/N^m in log space") {
    // deviation from m*log10(n) shrinks as (n-1)! dwarfs m
    const auto big = pad_all_fix_prob(2048, 1, 256);
    CHECK(std::abs(big.log10_value + 256 * std::log10(2048.0)) < 1e-6);
    CHECK(big.log10_value == doctest::Approx(-256 * std::log10(2048.0)).epsilon(1e-9));

    const auto mid = pad_all_fix_prob(64, 1, 4);
    CHECK(std::abs(mid.log10_value + 4 * std::log10(64.0)) < 1e-6);

    // small case where the correction is visible but still tiny
    const auto small = pad_all_fix_prob(16, 1, 4);
    CHECK(std::abs(small.log10_value + 4 * std::log10(16.0)) < 1e-3);
}

TEST_CASE("1/C(n,p) obeys the 1/n bound with equality only at the edges") {
    for (std::uint32_t n : {8u, 64u, 1024u, 16384u}) {
        const double bound = -std::log10(double(n));
        for (std::uint32_t p : {1u, 2u, 3u, n / 2, n - 2, n - 1}) {
            const auto prob = collision_prob_complete(n, p);
            CHECK(prob.log10_value <= bound + 1e-9);
            if (p == 1 || p == n - 1) {
                REQUIRE(prob.exact.has_value());
                CHECK(*prob.exact == BigRational(1, n));
            } else {
                CHECK(prob.log10_value < bound - 1e-6);
            }
        }
    }
}

TEST_CASE("pad_all_fix_prob is monotone non-increasing in m") {
    for (std::uint32_t n : {4u, 8u, 16u}) {
        for (std::uint32_t p : {1u, 2u, n / 2}) {
            double prev = pad_all_fix_prob(n, p, 1).log10_value;
            for (std::uint32_t m = 2; m <= 10; ++m) {
                const double cur = pad_all_fix_prob(n, p, m).log10_value;
                CHECK(cur <= prev + 1e-12);
                prev = cur;
            }
        }
    }
}

TEST_CASE("approx_bound_incomplete: exact small values and log at scale") {
    const auto half = approx_bound_incomplete(2, 1);
    REQUIRE(half.exact.has_value());
    CHECK(*half.exact == BigRational(1, 2));
    CHECK(half.value() == 0.5);

    const auto big = approx_bound_incomplete(2048, 256);
    CHECK(big.log10_value == doctest::Approx(-256 * std::log10(2048.0)).epsilon(1e-12));

    const auto tiny = approx_bound_incomplete(64, 4);
    CHECK(tiny.value() == doctest::Approx(std::pow(2.0, -24)).epsilon(1e-12));
}

TEST_CASE("monte carlo rate: degenerate popcounts hit every trial") {
    const auto est = monte_carlo_collision_rate(8, 0, 4, 1000, seed_of(40, 1));
    CHECK(est.rate == 1.0);
    CHECK(est.hits == 1000);
}

TEST_CASE("monte carlo rate approaches 1/C(n,p)") {
    constexpr std::uint64_t kTrials = 200000;
    for (std::uint32_t p : {1u, 2u}) {
        const auto est = monte_carlo_collision_rate(8, p, 16, kTrials, seed_of(40, p));
        const double expected = 1.0 / choose(8, p);
        const double sigma = std::sqrt(expected * (1 - expected) / double(kTrials));
        CHECK(std::abs(est.rate - expected) < 5 * sigma);
    }
}

TEST_CASE("worst-case pad rate: impossible, coin-flip, and 5/92 cells") {
    const auto impossible = worst_case_pad_rate(4, 1, 7, 2000, seed_of(41, 1));
    CHECK(impossible.hits == 0);

    const auto coin = worst_case_pad_rate(2, 1, 1, 100000, seed_of(41, 2));
    CHECK(std::abs(coin.rate - 0.5) < 5 * coin.std_error);

    const auto cell = worst_case_pad_rate(4, 1, 2, 100000, seed_of(41, 3));
    const double expected = 5.0 / 92.0;
    const double sigma = std::sqrt(expected * (1 - expected) / 100000.0);
    CHECK(std::abs(cell.rate - expected) < 5 * sigma);

    CHECK_THROWS_AS(worst_case_pad_rate(2, 1, 3, 10, seed_of(41, 4)), std::invalid_argument);
}

TEST_CASE("shuffle uniformity: unbiased exact, paper biased with frozen histogram") {
    const auto unbiased = shuffle_uniformity_exhaustive(3, ShuffleMode::Unbiased);
    CHECK(unbiased.exactly_uniform);
    CHECK(unbiased.draws == 6);
    CHECK(unbiased.counts == std::vector<std::uint64_t>(6, 1));

    const auto paper = shuffle_uniformity_exhaustive(3, ShuffleMode::Paper);
    CHECK_FALSE(paper.exactly_uniform);
    CHECK(paper.draws == 27);
    CHECK(paper.counts == std::vector<std::uint64_t>{4, 5, 5, 4, 5, 4});

    const auto unbiased4 = shuffle_uniformity_exhaustive(4, ShuffleMode::Unbiased);
    CHECK(unbiased4.exactly_uniform);
    CHECK(unbiased4.draws == 24);

    CHECK_THROWS_AS(shuffle_uniformity_exhaustive(7, ShuffleMode::Paper),
                    std::invalid_argument);
}

TEST_CASE("sampled shuffle uniformity passes chi-square for the unbiased mode") {
    const auto report =
        shuffle_uniformity_sampled(4, ShuffleMode::Unbiased, 1000000, seed_of(42, 1));
    CHECK(report.p_value > 0.001);
}

TEST_CASE("reports: fields come and go with p and m") {
    const auto full = make_report(4096, 1, std::uint64_t(256));
    CHECK(full.complete_group_prob.has_value());
    CHECK(full.pad_all_fix.has_value());
    CHECK(full.approx_1_over_n_pow_m.has_value());
    CHECK(*full.bound_1_over_n.exact == BigRational(1, 4096));

    const auto result2_only = make_report(2048, std::nullopt, std::uint64_t(256));
    CHECK_FALSE(result2_only.complete_group_prob.has_value());
    CHECK_FALSE(result2_only.pad_all_fix.has_value());
    REQUIRE(result2_only.approx_1_over_n_pow_m.has_value());
    CHECK(result2_only.approx_1_over_n_pow_m->log10_value ==
          doctest::Approx(-256 * std::log10(2048.0)).epsilon(1e-9));

    const auto text = report_text(full);
    CHECK(text.find("below 0.025%: yes") != std::string::npos);
    const auto tsv = report_tsv_row(full);
    CHECK(tsv.find("4096\t1\t256\t") == 0);
    CHECK(report_tsv_header().find("exact_log10") != std::string::npos);
}
