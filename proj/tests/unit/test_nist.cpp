#include <string>

#include "doctest.h"
#include "tag/errors.hpp"
#include "tag/nist.hpp"
#include "tag/rng.hpp"

using namespace tag;

namespace {

// First 100 bits of the binary expansion used throughout the SP 800-22 worked examples.
const std::string kEpsilon100 =
    "1100100100001111110110101010001000100001011010001100001000110100110001001100011001100010100010111000";

const std::string kEpsilon128 =
    "11001100000101010110110001001100111000000000001001001101010100010001001111010110100000001101011111001100111001101101100010110010";

BitSequence random_bits(std::uint64_t seed, std::size_t n) {
    Rng rng(seed);
    BitSequence b(n);
    for (auto& x : b) x = static_cast<std::uint8_t>(rng.next() >> 63);
    return b;
}

}  // namespace

TEST_CASE("frequency test reference vectors") {
    CHECK(nist::frequency(from_string("1011010101")) == doctest::Approx(0.527089).epsilon(1e-5));
    CHECK(nist::frequency(from_string(kEpsilon100)) == doctest::Approx(0.109599).epsilon(1e-5));
}

TEST_CASE("block frequency reference vectors") {
    CHECK(nist::block_frequency(from_string("0110011010"), 3) == doctest::Approx(0.801252).epsilon(1e-5));
    CHECK(nist::block_frequency(from_string(kEpsilon100), 10) == doctest::Approx(0.706438).epsilon(1e-5));
}

TEST_CASE("cumulative sums reference vectors") {
    CHECK(nist::cumulative_sums(from_string("1011010111"), true) == doctest::Approx(0.4116588).epsilon(1e-5));
    CHECK(nist::cumulative_sums(from_string(kEpsilon100), true) == doctest::Approx(0.219194).epsilon(1e-5));
    CHECK(nist::cumulative_sums(from_string(kEpsilon100), false) == doctest::Approx(0.114866).epsilon(1e-5));
}

TEST_CASE("runs reference vectors") {
    CHECK(nist::runs(from_string("1001101011")) == doctest::Approx(0.147232).epsilon(1e-5));
    CHECK(nist::runs(from_string(kEpsilon100)) == doctest::Approx(0.500798).epsilon(1e-5));
}

TEST_CASE("longest run reference vector") {
    CHECK(nist::longest_run(from_string(kEpsilon128)) == doctest::Approx(0.180609).epsilon(1e-5));
    CHECK_THROWS_AS(nist::longest_run(from_string("0101")), ConfigError);
}

// Values from an independent numpy evaluation of the same statistic. The published worked
// example values for this test (0.029523, 0.168669) do not follow from its own threshold.
TEST_CASE("spectral reference vectors") {
    CHECK(nist::spectral(from_string("1001010011")) == doctest::Approx(0.468160).epsilon(1e-5));
    CHECK(nist::spectral(from_string(kEpsilon100)) == doctest::Approx(0.646355).epsilon(1e-5));
}

TEST_CASE("spectral test rejects a periodic sequence") {
    BitSequence b(1024);
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = static_cast<std::uint8_t>((i / 4) % 2);
    CHECK(nist::spectral(b) < nist::kSignificance);
}

TEST_CASE("approximate entropy reference vectors") {
    CHECK(nist::approximate_entropy(from_string("0100110101"), 3) == doctest::Approx(0.261961).epsilon(1e-5));
    CHECK(nist::approximate_entropy(from_string(kEpsilon100), 2) == doctest::Approx(0.235301).epsilon(1e-5));
}

TEST_CASE("serial reference vector") {
    const auto [p1, p2] = nist::serial(from_string("0011011101"), 3);
    CHECK(p1 == doctest::Approx(0.808792).epsilon(1e-5));
    CHECK(p2 == doctest::Approx(0.670320).epsilon(1e-5));
}

TEST_CASE("battery passes a seeded generator sequence") {
    const auto verdicts = nist::battery(random_bits(20240601, 10000));
    REQUIRE(verdicts.size() == 10);
    for (const auto& v : verdicts) {
        INFO(v.test << " p=" << v.p_value);
        CHECK(v.pass);
        CHECK(v.p_value >= 0.0);
        CHECK(v.p_value <= 1.0);
        CHECK(v.pass == (v.p_value >= nist::kSignificance));
    }
}

TEST_CASE("all-zero sequence fails the frequency test") {
    CHECK(nist::frequency(BitSequence(2000, 0)) < 1e-10);
}

TEST_CASE("alternating sequence is balanced but has far too many runs") {
    BitSequence alt(2000);
    for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = static_cast<std::uint8_t>(i % 2);
    CHECK(nist::frequency(alt) == doctest::Approx(1.0));
    CHECK(nist::runs(alt) < nist::kSignificance);
}

TEST_CASE("battery rejects short input naming the minimum") {
    const auto mins = nist::minimum_lengths();
    REQUIRE(mins.size() == 8);
    CHECK(mins[5].first == "FFT");
    CHECK(mins[5].second == 1000);
    try {
        nist::battery(random_bits(7, 500));
        FAIL("expected a length error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("1000") != std::string::npos);
    }
}

TEST_CASE("battery runs the ten statistics in a fixed order") {
    const auto v = nist::battery(random_bits(11, 2000));
    const char* names[] = {"Frequency",   "Block Frequency",    "Cumulative Sums (forward)",
                           "Cumulative Sums (backward)", "Runs", "Longest Run", "FFT",
                           "Approximate Entropy", "Serial (1)", "Serial (2)"};
    for (std::size_t i = 0; i < 10; ++i) CHECK(v[i].test == names[i]);
}
