#include "tag/protocol.hpp"

#include <openssl/evp.h>
#include <openssl/hmac.h>

#include <algorithm>
#include <array>
#include <queue>

#include "tag/errors.hpp"
#include "tag/golay.hpp"
#include "tag/reconcile.hpp"
#include "tag/rng.hpp"

namespace tag {

namespace {

std::vector<std::uint8_t> length_prefixed(const BitSequence& bits) {
    std::vector<std::uint8_t> out{static_cast<std::uint8_t>(bits.size())};
    const auto packed = pack_bytes(bits);
    out.insert(out.end(), packed.begin(), packed.end());
    return out;
}

Tag hmac64(const std::vector<std::uint8_t>& key, const std::vector<std::uint8_t>& msg) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int md_len = 0;
    if (!HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()), msg.data(), msg.size(), md.data(), &md_len) ||
        md_len < 8) {
        throw ConfigError("HMAC-SHA256 failed");
    }
    Tag t{};
    std::copy(md.begin(), md.begin() + 8, t.begin());
    return t;
}

}  // namespace

Tag fingerprint(const BitSequence& key_material, const BitSequence& message) {
    return hmac64(length_prefixed(key_material), length_prefixed(message));
}

bool verify_fingerprint(const BitSequence& key_material, const BitSequence& message, const Tag& tag) {
    return fingerprint(key_material, message) == tag;
}

Tag confirm_tag(const BitSequence& key, std::string_view label, const BitSequence& context) {
    std::vector<std::uint8_t> msg(label.begin(), label.end());
    msg.push_back(0);
    const auto ctx = length_prefixed(context);
    msg.insert(msg.end(), ctx.begin(), ctx.end());
    return hmac64(length_prefixed(key), msg);
}

const char* to_string(Role r) { return r == Role::wearable ? "wearable" : "device"; }

const char* to_string(SessionState s) {
    switch (s) {
        case SessionState::idle: return "idle";
        case SessionState::awaiting_vibration: return "awaiting_vibration";
        case SessionState::collecting: return "collecting";
        case SessionState::reconciling: return "reconciling";
        case SessionState::confirming: return "confirming";
        case SessionState::paired: return "paired";
        case SessionState::failed: return "failed";
    }
    return "unknown";
}

const char* to_string(FailureReason f) {
    switch (f) {
        case FailureReason::none: return "none";
        case FailureReason::fingerprint_mismatch: return "fingerprint_mismatch";
        case FailureReason::key_mismatch: return "key_mismatch";
        case FailureReason::dos_timeout: return "dos_timeout";
        case FailureReason::timeout: return "timeout";
        case FailureReason::max_attempts: return "max_attempts";
    }
    return "unknown";
}

const char* confirm_label(Role r) { return r == Role::wearable ? "confirm-w" : "confirm-d"; }

TrialScene attempt_scene(const TrialScene& scene, int attempt) {
    TrialScene s = scene;
    if (attempt > 0) s.rng_seed = derive_seed(scene.rng_seed, static_cast<std::uint64_t>(attempt));
    return s;
}

bool key_confirm(PairingSession& a, PairingSession& b) {
    if (!a.secret_key || !b.secret_key) throw ConfigError("key confirmation needs a secret key on both sides");
    const Tag ta = confirm_tag(*a.secret_key, confirm_label(a.role), a.context);
    const Tag tb = confirm_tag(*b.secret_key, confirm_label(b.role), b.context);
    const bool b_ok = confirm_tag(*b.secret_key, confirm_label(a.role), b.context) == ta;
    const bool a_ok = confirm_tag(*a.secret_key, confirm_label(b.role), a.context) == tb;
    const bool ok = a_ok && b_ok;
    for (PairingSession* s : {&a, &b}) {
        s->state = ok ? SessionState::paired : SessionState::failed;
        s->failure = ok ? FailureReason::none : FailureReason::key_mismatch;
    }
    return ok;
}

bool dos_fallback(PairingSession& a, PairingSession& b) {
    if (!a.raw_bits || !b.raw_bits) throw ConfigError("fallback needs raw bits on both sides");
    for (PairingSession* s : {&a, &b}) {
        s->secret_key = s->raw_bits;
        s->context.clear();
        s->fallback = true;
        s->state = SessionState::confirming;
    }
    return key_confirm(a, b);
}

namespace {

enum class EventKind { deliver, collected, timer };

struct Event {
    double time;
    std::uint64_t seq;
    EventKind kind;
    Role to;
    std::vector<std::uint8_t> frame;
    int attempt;
    int vibration;
};

struct Later {
    bool operator()(const Event& a, const Event& b) const {
        return a.time != b.time ? a.time > b.time : a.seq > b.seq;
    }
};

constexpr int kEventLimit = 10000;

class PairingRun {
public:
    PairingRun(const TrialScene& scene, const ChannelModel& channel, const ProtocolConfig& cfg)
        : scene_(scene), channel_(channel), cfg_(cfg), rng_(derive_seed(channel.seed, 0xc4a)) {
        if (cfg.max_attempts < 1) throw ConfigError("max_attempts must be at least 1");
        if (!(cfg.timeout_factor > 0.0)) throw ConfigError("timeout_factor must be positive");
        if (channel.latency < 0.0) throw ConfigError("latency must be non-negative");
        validate(scene);
        const double timeout = cfg.timeout_factor * scene.excitation.duration;
        w_.role = Role::wearable;
        d_.role = Role::device;
        w_.timeout = d_.timeout = timeout;
    }

    TrialOutcome run() {
        start_attempt();
        int processed = 0;
        while (!queue_.empty() && processed++ < kEventLimit) {
            Event e = queue_.top();
            queue_.pop();
            now_ = e.time;
            switch (e.kind) {
                case EventKind::deliver: on_frame(e.to, e.frame); break;
                case EventKind::collected: on_collected(e.to, e.attempt, e.vibration); break;
                case EventKind::timer: on_timer(e.to, e.attempt); break;
            }
            if (terminal(w_) && terminal(d_)) break;
        }
        out_.elapsed = now_;
        out_.attempts = std::min(w_.attempts, cfg_.max_attempts);
        out_.fallback = w_.fallback;
        out_.paired = w_.state == SessionState::paired && d_.state == SessionState::paired;
        out_.wearable_key = w_.secret_key;
        out_.device_key = d_.secret_key;
        if (out_.paired) {
            out_.failure = FailureReason::none;
        } else {
            out_.failure = w_.failure != FailureReason::none ? w_.failure : d_.failure;
            if (out_.failure == FailureReason::none) out_.failure = FailureReason::timeout;
        }
        return std::move(out_);
    }

private:
    static bool terminal(const PairingSession& s) {
        return s.state == SessionState::paired || s.state == SessionState::failed;
    }

    PairingSession& session(Role r) { return r == Role::wearable ? w_ : d_; }
    Role peer(Role r) const { return r == Role::wearable ? Role::device : Role::wearable; }
    bool is_sender(Role r) const { return r == cfg_.delta_sender; }

    void push(double at, EventKind kind, Role to, std::vector<std::uint8_t> frame = {}, int attempt = 0,
              int vibration = 0) {
        queue_.push(Event{at, seq_++, kind, to, std::move(frame), attempt, vibration});
    }

    void send(Role from, const Message& m) {
        auto frame = serialize(m);
        out_.transcript.push_back(frame);
        if (channel_.loss_probability > 0.0 && rng_.bernoulli(channel_.loss_probability)) return;
        if (channel_.intercept) {
            auto changed = channel_.intercept(from, frame);
            if (!changed) return;
            frame = std::move(*changed);
        }
        if (channel_.corrupt_probability > 0.0 && rng_.bernoulli(channel_.corrupt_probability) && !frame.empty()) {
            const std::uint64_t bit = rng_.below(frame.size() * 8);
            frame[bit / 8] ^= static_cast<std::uint8_t>(0x80u >> (bit % 8));
        }
        push(now_ + channel_.latency, EventKind::deliver, peer(from), std::move(frame));
    }

    AttemptRecord& record(int attempt) {
        while (static_cast<int>(out_.history.size()) <= attempt) out_.history.emplace_back();
        return out_.history[static_cast<std::size_t>(attempt)];
    }

    BitSequence collect(Role r, int attempt) {
        const TrialScene s = attempt_scene(scene_, attempt);
        const bool wearable = r == Role::wearable;
        const AccelTrace trace = synthesize_trace(s, wearable ? Observer::wearable : Observer::device,
                                                  wearable ? cfg_.wearable_window : cfg_.device_window);
        BitSequence bits = extract_bits(trace, cfg_.pipeline);
        auto& rec = record(attempt);
        (wearable ? rec.wearable_raw : rec.device_raw) = bits;
        return bits;
    }

    void reset_for_attempt(PairingSession& s) {
        s.raw_bits.reset();
        s.secret_key.reset();
        s.context.clear();
        pending_delta_.reset();
    }

    void start_attempt() {
        reset_for_attempt(w_);
        ++w_.attempts;
        w_.state = SessionState::awaiting_vibration;
        send(Role::wearable, Message::pair_request());
        push(now_ + w_.timeout, EventKind::timer, Role::wearable, {}, w_.attempts);
    }

    void end_attempt(Role r, FailureReason why) {
        PairingSession& s = session(r);
        s.failure = why;
        if (s.raw_bits) {
            auto& rec = record(s.vibration);
            if (rec.outcome == FailureReason::none) rec.outcome = why;
        }
        if (r == Role::device) {
            s.state = SessionState::idle;
            return;
        }
        if (w_.attempts < cfg_.max_attempts) {
            start_attempt();
        } else if (cfg_.dos_fallback && why == FailureReason::timeout) {
            begin_fallback();
        } else {
            w_.state = SessionState::failed;
            if (why == FailureReason::timeout) w_.failure = FailureReason::max_attempts;
        }
    }

    void begin_fallback() {
        w_.fallback = true;
        if (!w_.raw_bits) {
            w_.state = SessionState::failed;
            w_.failure = FailureReason::dos_timeout;
            return;
        }
        w_.secret_key = w_.raw_bits;
        w_.context.clear();
        w_.state = SessionState::confirming;
        send(Role::wearable, Message::confirm(confirm_tag(*w_.secret_key, confirm_label(Role::wearable), {})));
        ++w_.attempts;
        push(now_ + w_.timeout, EventKind::timer, Role::wearable, {}, w_.attempts);
    }

    void on_timer(Role r, int attempt) {
        PairingSession& s = session(r);
        if (terminal(s) || s.attempts != attempt) return;
        if (r == Role::wearable) {
            if (w_.fallback) {
                w_.state = SessionState::failed;
                w_.failure = FailureReason::dos_timeout;
                return;
            }
            end_attempt(r, FailureReason::timeout);
            return;
        }
        if (s.state != SessionState::idle) end_attempt(r, FailureReason::timeout);
    }

    void on_collected(Role r, int attempt, int vibration) {
        PairingSession& s = session(r);
        if (terminal(s) || s.attempts != attempt || s.state != SessionState::collecting) return;
        s.vibration = vibration;
        s.raw_bits = collect(r, vibration);
        if (is_sender(r)) {
            const ReconciliationResult rec = sender_reconcile(*s.raw_bits);
            s.secret_key = rec.secret_key;
            s.context = rec.delta;
            (r == Role::wearable ? record(s.vibration).wearable_key : record(s.vibration).device_key) =
                rec.secret_key;
            s.state = SessionState::confirming;
            send(r, Message::make_delta(rec.delta, fingerprint(pack_raw(*s.raw_bits), rec.delta)));
        } else {
            s.state = SessionState::reconciling;
            if (pending_delta_) {
                const Message m = *pending_delta_;
                pending_delta_.reset();
                on_delta(r, m);
            }
        }
    }

    void on_frame(Role to, const std::vector<std::uint8_t>& frame) {
        Message m;
        try {
            m = deserialize(frame);
        } catch (const WireError&) {
            return;
        }
        PairingSession& s = session(to);
        if (to == Role::device && s.state == SessionState::failed) return;
        switch (m.type) {
            case MessageType::pair_request: on_pair_request(to); break;
            case MessageType::vibrate_start: on_vibrate_start(to); break;
            case MessageType::delta: on_delta(to, m); break;
            case MessageType::confirm: on_confirm(to, m); break;
            case MessageType::abort: on_abort(to, m); break;
        }
    }

    void on_pair_request(Role to) {
        if (to != Role::device) return;
        PairingSession& s = d_;
        if (s.state == SessionState::paired) return;
        reset_for_attempt(s);
        s.fallback = false;
        ++s.attempts;
        s.state = SessionState::collecting;
        const int vibration = vibrations_++;
        send(Role::device, Message::vibrate_start());
        push(now_ + scene_.excitation.duration, EventKind::collected, Role::device, {}, s.attempts, vibration);
        push(now_ + s.timeout, EventKind::timer, Role::device, {}, s.attempts);
    }

    void on_vibrate_start(Role to) {
        if (to != Role::wearable || w_.state != SessionState::awaiting_vibration) return;
        w_.state = SessionState::collecting;
        push(now_ + scene_.excitation.duration, EventKind::collected, Role::wearable, {}, w_.attempts,
             std::max(vibrations_ - 1, 0));
    }

    void on_delta(Role to, const Message& m) {
        if (is_sender(to)) return;
        PairingSession& s = session(to);
        if (s.state == SessionState::collecting) {
            pending_delta_ = m;
            return;
        }
        if (s.state != SessionState::reconciling || !s.raw_bits) return;
        const BitSequence c_w = receiver_reconstruct(*s.raw_bits, m.delta);
        if (!verify_fingerprint(c_w, m.delta, m.tag)) {
            send(to, Message::abort(AbortReason::fingerprint_mismatch));
            end_attempt(to, FailureReason::fingerprint_mismatch);
            return;
        }
        s.secret_key = from_word(GolayCodec::instance().decode(to_word(c_w)), 12);
        s.context = m.delta;
        (to == Role::wearable ? record(s.vibration).wearable_key : record(s.vibration).device_key) =
            s.secret_key;
        s.state = SessionState::confirming;
        send(to, Message::confirm(confirm_tag(*s.secret_key, confirm_label(to), s.context)));
    }

    void on_confirm(Role to, const Message& m) {
        PairingSession& s = session(to);
        if (terminal(s)) return;
        if (to == Role::device && s.state != SessionState::confirming) {
            // Fallback confirmation: adopt the raw sequence from the latest capture.
            if (!s.raw_bits) return;
            s.secret_key = s.raw_bits;
            s.context.clear();
            s.fallback = true;
            s.state = SessionState::confirming;
        }
        if (s.state != SessionState::confirming || !s.secret_key) return;
        const bool ok = confirm_tag(*s.secret_key, confirm_label(peer(to)), s.context) == m.tag;
        if (!ok) {
            send(to, Message::abort(AbortReason::key_mismatch));
            if (s.fallback) {
                s.state = SessionState::failed;
                s.failure = FailureReason::key_mismatch;
                return;
            }
            end_attempt(to, FailureReason::key_mismatch);
            return;
        }
        const bool first_to_verify = is_sender(to) != s.fallback;
        s.state = SessionState::paired;
        s.failure = FailureReason::none;
        if (first_to_verify) {
            send(to, Message::confirm(confirm_tag(*s.secret_key, confirm_label(to), s.context)));
        }
    }

    void on_abort(Role to, const Message& m) {
        PairingSession& s = session(to);
        if (terminal(s) && !(s.state == SessionState::paired && to == Role::wearable)) return;
        FailureReason why = FailureReason::timeout;
        if (m.reason == AbortReason::fingerprint_mismatch) why = FailureReason::fingerprint_mismatch;
        if (m.reason == AbortReason::key_mismatch) why = FailureReason::key_mismatch;
        if (s.fallback) {
            s.state = SessionState::failed;
            s.failure = why;
            return;
        }
        if (s.state == SessionState::paired) s.state = SessionState::confirming;
        end_attempt(to, why);
    }

    const TrialScene& scene_;
    const ChannelModel& channel_;
    const ProtocolConfig& cfg_;
    Rng rng_;
    PairingSession w_;
    PairingSession d_;
    std::priority_queue<Event, std::vector<Event>, Later> queue_;
    std::uint64_t seq_ = 0;
    double now_ = 0.0;
    int vibrations_ = 0;
    std::optional<Message> pending_delta_;
    TrialOutcome out_;
};

}  // namespace

TrialOutcome run_pairing(const TrialScene& scene, const ChannelModel& channel, const ProtocolConfig& cfg) {
    return PairingRun(scene, channel, cfg).run();
}

}  // namespace tag
