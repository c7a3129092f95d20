#include "tag/wire.hpp"

#include <algorithm>

namespace tag {

const char* to_string(MessageType t) {
    switch (t) {
        case MessageType::pair_request: return "PairRequest";
        case MessageType::vibrate_start: return "VibrateStart";
        case MessageType::delta: return "Delta";
        case MessageType::confirm: return "Confirm";
        case MessageType::abort: return "Abort";
    }
    return "Unknown";
}

const char* to_string(AbortReason r) {
    switch (r) {
        case AbortReason::fingerprint_mismatch: return "fingerprint_mismatch";
        case AbortReason::key_mismatch: return "key_mismatch";
        case AbortReason::timeout: return "timeout";
    }
    return "unknown";
}

std::vector<std::uint8_t> serialize(const Message& m) {
    std::vector<std::uint8_t> body{kWireVersion, static_cast<std::uint8_t>(m.type)};
    switch (m.type) {
        case MessageType::pair_request:
        case MessageType::vibrate_start:
            break;
        case MessageType::delta: {
            if (m.delta.size() != 23) throw WireError("Delta must carry exactly 23 bits");
            body.push_back(23);
            const auto packed = pack_bytes(m.delta);
            body.insert(body.end(), packed.begin(), packed.end());
            body.insert(body.end(), m.tag.begin(), m.tag.end());
            break;
        }
        case MessageType::confirm:
            body.insert(body.end(), m.tag.begin(), m.tag.end());
            break;
        case MessageType::abort:
            body.push_back(static_cast<std::uint8_t>(m.reason));
            break;
    }
    body.insert(body.begin(), {static_cast<std::uint8_t>(body.size() >> 8), static_cast<std::uint8_t>(body.size() & 0xFF)});
    return body;
}

Message deserialize(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 4) throw WireError("frame shorter than header");
    const std::size_t len = (static_cast<std::size_t>(bytes[0]) << 8) | bytes[1];
    if (len != bytes.size() - 2) throw WireError("length prefix does not match frame size");
    if (bytes[2] != kWireVersion) throw WireError("unsupported wire version");
    const std::uint8_t type = bytes[3];
    const std::size_t payload = len - 2;
    const std::uint8_t* p = bytes.data() + 4;
    Message m;
    switch (type) {
        case 1:
        case 2:
            if (payload != 0) throw WireError("unexpected payload");
            m.type = static_cast<MessageType>(type);
            return m;
        case 3:
            if (payload != 1 + 3 + 8 || p[0] != 23) throw WireError("malformed Delta");
            if (p[3] & 0x01) throw WireError("Delta padding bit set");
            m.type = MessageType::delta;
            m.delta = unpack_bytes(p + 1, 23);
            std::copy(p + 4, p + 12, m.tag.begin());
            return m;
        case 4:
            if (payload != 8) throw WireError("malformed Confirm");
            m.type = MessageType::confirm;
            std::copy(p, p + 8, m.tag.begin());
            return m;
        case 5:
            if (payload != 1 || p[0] < 1 || p[0] > 3) throw WireError("malformed Abort");
            m.type = MessageType::abort;
            m.reason = static_cast<AbortReason>(p[0]);
            return m;
        default:
            throw WireError("unknown message type");
    }
}

}  // namespace tag
