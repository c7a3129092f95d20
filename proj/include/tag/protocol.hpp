#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "tag/bits.hpp"
#include "tag/encoder.hpp"
#include "tag/vibration.hpp"
#include "tag/wire.hpp"

namespace tag {

// HMAC-SHA256 over the packed message, keyed by the packed key material, truncated to 64 bits.
Tag fingerprint(const BitSequence& key_material, const BitSequence& message);
bool verify_fingerprint(const BitSequence& key_material, const BitSequence& message, const Tag& tag);
Tag confirm_tag(const BitSequence& key, std::string_view label, const BitSequence& context);

enum class Role { wearable, device };
enum class SessionState { idle, awaiting_vibration, collecting, reconciling, confirming, paired, failed };
enum class FailureReason { none, fingerprint_mismatch, key_mismatch, dos_timeout, timeout, max_attempts };

const char* to_string(Role r);
const char* to_string(SessionState s);
const char* to_string(FailureReason f);
const char* confirm_label(Role r);

struct ProtocolConfig {
    int max_attempts = 3;
    double timeout_factor = 2.0;  // per-attempt timeout in units of the sweep duration
    Role delta_sender = Role::wearable;
    bool dos_fallback = true;
    PipelineConfig pipeline;
    CaptureWindow wearable_window;
    CaptureWindow device_window;
};

struct ChannelModel {
    double latency = 0.01;
    double loss_probability = 0.0;
    double corrupt_probability = 0.0;
    std::uint64_t seed = 0;
    // Sees every frame in flight. Return nullopt to drop it or different bytes to tamper.
    std::function<std::optional<std::vector<std::uint8_t>>(Role from, const std::vector<std::uint8_t>& frame)> intercept;
};

struct PairingSession {
    Role role = Role::wearable;
    SessionState state = SessionState::idle;
    int attempts = 0;
    int vibration = 0;  // motor run behind raw_bits
    double timeout = 3.5;
    std::optional<BitSequence> raw_bits;
    std::optional<BitSequence> secret_key;
    BitSequence context;  // delta of the current attempt, empty in fallback
    bool fallback = false;
    FailureReason failure = FailureReason::none;
};

// One entry per motor run.
struct AttemptRecord {
    BitSequence wearable_raw;
    BitSequence device_raw;
    std::optional<BitSequence> wearable_key;
    std::optional<BitSequence> device_key;
    FailureReason outcome = FailureReason::none;
};

struct TrialOutcome {
    bool paired = false;
    bool fallback = false;
    int attempts = 0;
    FailureReason failure = FailureReason::none;
    std::optional<BitSequence> wearable_key;
    std::optional<BitSequence> device_key;
    std::vector<AttemptRecord> history;
    std::vector<std::vector<std::uint8_t>> transcript;  // every frame handed to the channel
    double elapsed = 0.0;
};

TrialOutcome run_pairing(const TrialScene& scene, const ChannelModel& channel = {}, const ProtocolConfig& cfg = {});

// Scene for a given attempt: attempt 0 keeps the scene's own noise seed.
TrialScene attempt_scene(const TrialScene& scene, int attempt);

// In-memory confirmation round between two sessions in the confirming state.
bool key_confirm(PairingSession& a, PairingSession& b);

// Both sides adopt their raw sequences and confirm; succeeds only on an exact match.
bool dos_fallback(PairingSession& a, PairingSession& b);

}  // namespace tag
