#include "doctest.h"
#include "tag/wire.hpp"

using namespace tag;

TEST_CASE("every message type round trips") {
    const Tag t{1, 2, 3, 4, 5, 6, 7, 8};
    const Message msgs[] = {Message::pair_request(), Message::vibrate_start(),
                            Message::make_delta(from_string("10110011100011110000101"), t), Message::confirm(t),
                            Message::abort(AbortReason::key_mismatch)};
    for (const auto& m : msgs) CHECK(deserialize(serialize(m)) == m);
}

TEST_CASE("delta frame layout") {
    const Tag t{0xAA, 0xBB, 0xCC, 0xDD, 0xEE, 0xFF, 0x00, 0x11};
    const auto f = serialize(Message::make_delta(from_string("10110011100011110000101"), t));
    const std::vector<std::uint8_t> expected = {0x00, 0x0E, 0x01, 0x03, 23, 0xB3, 0x8F, 0x0A,
                                                0xAA, 0xBB, 0xCC, 0xDD, 0xEE, 0xFF, 0x00, 0x11};
    CHECK(f == expected);
}

TEST_CASE("short header frames") {
    CHECK(serialize(Message::pair_request()) == std::vector<std::uint8_t>{0, 2, 1, 1});
    CHECK(serialize(Message::abort(AbortReason::timeout)) == std::vector<std::uint8_t>{0, 3, 1, 5, 3});
}

TEST_CASE("malformed frames are rejected") {
    const Tag t{};
    const auto good = serialize(Message::make_delta(BitSequence(23, 1), t));
    auto bad = good;
    bad[1] += 1;
    CHECK_THROWS_AS(deserialize(bad), WireError);
    bad = good;
    bad[2] = 2;
    CHECK_THROWS_AS(deserialize(bad), WireError);
    bad = good;
    bad[3] = 9;
    CHECK_THROWS_AS(deserialize(bad), WireError);
    bad = good;
    bad[4] = 22;
    CHECK_THROWS_AS(deserialize(bad), WireError);
    bad = good;
    bad[7] |= 0x01;
    CHECK_THROWS_AS(deserialize(bad), WireError);
    CHECK_THROWS_AS(deserialize({0, 1, 1}), WireError);
    CHECK_THROWS_AS(deserialize({0, 3, 1, 5, 7}), WireError);
    CHECK_THROWS_AS(deserialize({0, 3, 1, 1, 0}), WireError);
    CHECK_THROWS_AS(serialize(Message::make_delta(BitSequence(12, 0), t)), WireError);
}

TEST_CASE("names") {
    CHECK(std::string(to_string(MessageType::delta)) == "Delta");
    CHECK(std::string(to_string(AbortReason::fingerprint_mismatch)) == "fingerprint_mismatch");
}
