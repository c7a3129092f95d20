#pragma once

#include "tag/bits.hpp"

namespace tag {

struct ReconciliationResult {
    BitSequence delta;       // 23 bits
    BitSequence secret_key;  // 12 bits
    bool corrected = false;
};

// Drops the final raw bit (low bit of the last antiresonance code).
BitSequence pack_raw(const BitSequence& raw24);

ReconciliationResult sender_reconcile(const BitSequence& raw24);

// Reconstructs the sender's packed sequence from delta and local bits.
BitSequence receiver_reconstruct(const BitSequence& raw24, const BitSequence& delta);
ReconciliationResult receiver_reconcile_full(const BitSequence& raw24, const BitSequence& delta);
BitSequence receiver_reconcile(const BitSequence& raw24, const BitSequence& delta);

}  // namespace tag
