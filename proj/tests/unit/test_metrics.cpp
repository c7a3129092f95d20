#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "tag/errors.hpp"
#include "tag/metrics.hpp"
#include "tag/rng.hpp"

using namespace tag;

namespace {

TrialReport with_code(std::uint32_t code12) {
    TrialReport r;
    r.wearable_bits = BitSequence(24, 0);
    r.wearable_bits[22] = static_cast<std::uint8_t>(code12 >> 1);
    r.wearable_bits[23] = static_cast<std::uint8_t>(code12 & 1);
    return r;
}

}  // namespace

TEST_CASE("bit mismatch rate") {
    const auto a = from_string("101100111000101100111000");
    auto b = a;
    CHECK(bit_mismatch_rate(a, b) == 0.0);
    for (auto& x : b) x ^= 1;
    CHECK(bit_mismatch_rate(a, b) == 1.0);
    b = a;
    b[0] ^= 1, b[5] ^= 1, b[23] ^= 1;
    CHECK(bit_mismatch_rate(a, b) == 0.125);
    CHECK(bit_mismatch_rate(b, a) == 0.125);
    CHECK_THROWS(bit_mismatch_rate(a, from_string("1")));
    CHECK_THROWS(bit_mismatch_rate({}, {}));
}

TEST_CASE("bit mismatch rate obeys the triangle inequality") {
    Rng rng(1);
    for (int i = 0; i < 200; ++i) {
        BitSequence x(24), y(24), z(24);
        for (std::size_t k = 0; k < 24; ++k) {
            x[k] = static_cast<std::uint8_t>(rng.below(2));
            y[k] = static_cast<std::uint8_t>(rng.below(2));
            z[k] = static_cast<std::uint8_t>(rng.below(2));
        }
        CHECK(bit_mismatch_rate(x, z) <= bit_mismatch_rate(x, y) + bit_mismatch_rate(y, z) + 1e-12);
    }
}

TEST_CASE("code entropy examples") {
    std::vector<TrialReport> uniform, constant;
    for (std::uint32_t i = 0; i < 400; ++i) {
        uniform.push_back(with_code(i % 4));
        constant.push_back(with_code(2));
    }
    CHECK(entropy_per_code(uniform, 12) == doctest::Approx(2.0));
    CHECK(entropy_per_code(constant, 12) == doctest::Approx(0.0));
    CHECK(entropy_per_code(uniform, 1) == doctest::Approx(0.0));
}

TEST_CASE("key bit entropy skips trials without a key") {
    std::vector<TrialReport> reps(4);
    reps[0].wearable_key = BitSequence(12, 0);
    reps[1].wearable_key = BitSequence(12, 1);
    CHECK(entropy_per_key_bit(reps, 3) == doctest::Approx(1.0));
}

TEST_CASE("mutual information properties") {
    Rng rng(8);
    std::vector<std::uint32_t> x(10000), y(10000);
    for (auto& v : x) v = static_cast<std::uint32_t>(rng.below(2));
    for (auto& v : y) v = static_cast<std::uint32_t>(rng.below(2));
    CHECK(mutual_information(x, y) <= 0.01);
    CHECK(mutual_information(x, y) >= 0.0);
    CHECK(std::abs(mutual_information(x, x) - entropy(x)) < 1e-9);
    CHECK(std::abs(mutual_information(x, y) - mutual_information(y, x)) < 1e-9);
    std::vector<std::uint32_t> four(1000);
    for (std::size_t i = 0; i < four.size(); ++i) four[i] = static_cast<std::uint32_t>(i % 4);
    CHECK(mutual_information(four, four) == doctest::Approx(2.0));
    CHECK_THROWS(mutual_information(std::vector<std::uint32_t>(50, 0), std::vector<std::uint32_t>(50, 0)));
    CHECK_THROWS(mutual_information(x, std::vector<std::uint32_t>(200, 0)));
}

TEST_CASE("pooled bits keep order") {
    const auto p = pooled_bits({from_string("10"), from_string("011")});
    CHECK(p == std::vector<std::uint32_t>{1, 0, 0, 1, 1});
}

TEST_CASE("bit rates") {
    CHECK(bit_rate(24, 1.75) == doctest::Approx(13.714285714).epsilon(1e-9));
    CHECK(std::round(bit_rate(24, 1.75) * 100.0) / 100.0 == 13.71);
    CHECK(std::round(bit_rate(12, 1.75) * 100.0) / 100.0 == 6.86);

    std::vector<TrialReport> reps(3);
    for (auto& r : reps) {
        r.wearable_bits = r.device_bits = BitSequence(24, 0);
        r.duration = 1.75;
    }
    reps[0].keys_matched = true;
    reps[0].wearable_key = reps[0].device_key = BitSequence(12, 0);
    reps[2].device_bits[0] = 1;
    const auto br = bit_rate(reps);
    REQUIRE(br.raw);
    REQUIRE(br.reconciled);
    CHECK(*br.raw == doctest::Approx(24.0 / 1.75));
    CHECK(*br.reconciled == doctest::Approx(12.0 / 1.75));

    std::vector<TrialReport> none(2);
    for (auto& r : none) {
        r.wearable_bits = BitSequence(24, 0);
        r.device_bits = BitSequence(24, 1);
        r.duration = 1.75;
    }
    const auto empty = bit_rate(none);
    CHECK_FALSE(empty.raw.has_value());
    CHECK_FALSE(empty.reconciled.has_value());
}

TEST_CASE("pearson correlation") {
    const std::vector<double> a = {1, 2, 3, 4, 5};
    const std::vector<double> b = {2, 4, 6, 8, 10};
    const std::vector<double> c = {5, 4, 3, 2, 1};
    CHECK(pearson_correlation(a, b) == doctest::Approx(1.0));
    CHECK(pearson_correlation(a, c) == doctest::Approx(-1.0));
}
