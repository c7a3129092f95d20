#include "tag/reconcile.hpp"

#include "tag/errors.hpp"
#include "tag/golay.hpp"

namespace tag {

BitSequence pack_raw(const BitSequence& raw24) {
    if (raw24.size() != 24) throw ConfigError("raw bit sequence must be 24 bits");
    return BitSequence(raw24.begin(), raw24.begin() + 23);
}

ReconciliationResult sender_reconcile(const BitSequence& raw24) {
    const auto& codec = GolayCodec::instance();
    const std::uint32_t w = to_word(pack_raw(raw24));
    const std::uint32_t key = codec.decode(w);
    const std::uint32_t c_o = codec.encode(key);
    ReconciliationResult r;
    r.delta = from_word(c_o ^ w, 23);
    r.secret_key = from_word(key, 12);
    r.corrected = (c_o != w);
    return r;
}

BitSequence receiver_reconstruct(const BitSequence& raw24, const BitSequence& delta) {
    if (delta.size() != 23) throw ConfigError("delta must be 23 bits");
    const auto& codec = GolayCodec::instance();
    const std::uint32_t d = to_word(pack_raw(raw24));
    const std::uint32_t dl = to_word(delta);
    return from_word(dl ^ codec.encode(codec.decode(dl ^ d)), 23);
}

ReconciliationResult receiver_reconcile_full(const BitSequence& raw24, const BitSequence& delta) {
    const auto& codec = GolayCodec::instance();
    const BitSequence c_w = receiver_reconstruct(raw24, delta);
    ReconciliationResult r;
    r.delta = delta;
    r.secret_key = from_word(codec.decode(to_word(c_w)), 12);
    r.corrected = !codec.is_codeword(to_word(delta) ^ to_word(pack_raw(raw24)));
    return r;
}

BitSequence receiver_reconcile(const BitSequence& raw24, const BitSequence& delta) {
    return receiver_reconcile_full(raw24, delta).secret_key;
}

}  // namespace tag
