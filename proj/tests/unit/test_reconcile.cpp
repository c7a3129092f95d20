#include <bit>
#include <vector>

#include "doctest.h"
#include "tag/errors.hpp"
#include "tag/golay.hpp"
#include "tag/reconcile.hpp"
#include "tag/rng.hpp"

using namespace tag;

namespace {

BitSequence raw_from_packed(std::uint32_t packed23, std::uint8_t last) {
    auto b = from_word(packed23, 23);
    b.push_back(last);
    return b;
}

}  // namespace

TEST_CASE("packing drops the final bit") {
    const auto raw = from_string("101100111000111100001011");
    CHECK(to_string(pack_raw(raw)) == "10110011100011110000101");
    CHECK_THROWS_AS(pack_raw(from_string("101")), ConfigError);
}

TEST_CASE("codeword raw gives a zero delta") {
    const auto& g = GolayCodec::instance();
    const auto r = sender_reconcile(raw_from_packed(g.encode(0x9C3), 1));
    CHECK(to_word(r.delta) == 0u);
    CHECK(to_word(r.secret_key) == 0x9C3u);
    CHECK_FALSE(r.corrected);
}

TEST_CASE("delta equals the error pattern for light errors") {
    const auto& g = GolayCodec::instance();
    const std::uint32_t e = (1u << 2) | (1u << 13) | (1u << 20);
    const auto r = sender_reconcile(raw_from_packed(g.encode(0x0F0) ^ e, 0));
    CHECK(to_word(r.delta) == e);
    CHECK(to_word(r.secret_key) == 0x0F0u);
    CHECK(r.corrected);
}

TEST_CASE("keys agree up to three packed differences") {
    Rng rng(17);
    for (int trial = 0; trial < 2000; ++trial) {
        const auto w = static_cast<std::uint32_t>(rng.below(1u << 23));
        std::uint32_t e = 0;
        const int flips = static_cast<int>(rng.below(4));
        while (std::popcount(e) < flips) e |= 1u << rng.below(23);
        const auto raw_w = raw_from_packed(w, static_cast<std::uint8_t>(rng.below(2)));
        const auto raw_d = raw_from_packed(w ^ e, static_cast<std::uint8_t>(rng.below(2)));
        const auto s = sender_reconcile(raw_w);
        CHECK(std::popcount(to_word(s.delta)) <= 3);
        CHECK(receiver_reconstruct(raw_d, s.delta) == pack_raw(raw_w));
        CHECK(receiver_reconcile(raw_d, s.delta) == s.secret_key);
    }
}

TEST_CASE("five packed differences usually break agreement") {
    Rng rng(23);
    int matches = 0;
    const int trials = 2000;
    for (int trial = 0; trial < trials; ++trial) {
        const auto w = static_cast<std::uint32_t>(rng.below(1u << 23));
        std::uint32_t e = 0;
        while (std::popcount(e) < 5) e |= 1u << rng.below(23);
        const auto s = sender_reconcile(raw_from_packed(w, 0));
        matches += receiver_reconcile(raw_from_packed(w ^ e, 0), s.delta) == s.secret_key;
    }
    CHECK(matches < trials / 20);
}

TEST_CASE("key and delta factorize over uniform raw words") {
    const auto& g = GolayCodec::instance();
    std::vector<std::uint8_t> seen(std::size_t{4096} * 2048, 0);
    std::vector<std::uint32_t> leader_index(std::size_t{1} << 23, 0xFFFFFFFFu);
    std::uint32_t leaders = 0;
    bool ok = true;
    for (std::uint32_t w = 0; w < (1u << 23); ++w) {
        const std::uint32_t key = g.decode(w);
        const std::uint32_t delta = g.encode(key) ^ w;
        if (leader_index[delta] == 0xFFFFFFFFu) leader_index[delta] = leaders++;
        auto& cell = seen[key * 2048 + leader_index[delta]];
        ok = ok && cell == 0 && leaders <= 2048;
        cell = 1;
    }
    CHECK(ok);
    CHECK(leaders == 2048);
}

TEST_CASE("receiver checks lengths") {
    CHECK_THROWS_AS(receiver_reconcile(from_string("1"), BitSequence(23, 0)), ConfigError);
    CHECK_THROWS_AS(receiver_reconcile(BitSequence(24, 0), BitSequence(22, 0)), ConfigError);
    CHECK_THROWS_AS(sender_reconcile(BitSequence(23, 0)), ConfigError);
}
