#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "tag/bits.hpp"

namespace tag {

// Byte layout (all multi-byte integers big-endian):
//   u16 length of the bytes that follow | u8 version (1) | u8 type | payload
// Payloads:
//   PairRequest, VibrateStart: empty
//   Delta:   u8 bit count (23) | 3 bytes bits, MSB first | 8-byte fingerprint
//   Confirm: 8-byte tag
//   Abort:   u8 reason
inline constexpr std::uint8_t kWireVersion = 1;

enum class MessageType : std::uint8_t { pair_request = 1, vibrate_start = 2, delta = 3, confirm = 4, abort = 5 };

enum class AbortReason : std::uint8_t { fingerprint_mismatch = 1, key_mismatch = 2, timeout = 3 };

using Tag = std::array<std::uint8_t, 8>;

struct Message {
    MessageType type = MessageType::pair_request;
    BitSequence delta;  // Delta only
    Tag tag{};          // Delta fingerprint or Confirm tag
    AbortReason reason = AbortReason::timeout;

    static Message pair_request() { return {MessageType::pair_request, {}, {}, AbortReason::timeout}; }
    static Message vibrate_start() { return {MessageType::vibrate_start, {}, {}, AbortReason::timeout}; }
    static Message make_delta(BitSequence d, Tag fp) { return {MessageType::delta, std::move(d), fp, AbortReason::timeout}; }
    static Message confirm(Tag t) { return {MessageType::confirm, {}, t, AbortReason::timeout}; }
    static Message abort(AbortReason r) { return {MessageType::abort, {}, {}, r}; }

    bool operator==(const Message&) const = default;
};

struct WireError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

const char* to_string(MessageType t);
const char* to_string(AbortReason r);

std::vector<std::uint8_t> serialize(const Message& m);
Message deserialize(const std::vector<std::uint8_t>& bytes);

}  // namespace tag
