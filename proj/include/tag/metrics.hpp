#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tag/bits.hpp"

namespace tag {

struct TrialReport {
    std::uint64_t seed = 0;
    std::string preset;
    std::string cell;
    BitSequence wearable_bits;
    BitSequence device_bits;
    BitSequence attacker_bits;  // empty when no eavesdropper ran
    BitSequence wearable_key;   // empty unless reconciliation produced a key
    BitSequence device_key;
    bool reconciled = false;    // false: raw-bit comparison only
    bool keys_matched = false;
    bool paired = false;
    bool fallback = false;
    int attempts = 0;
    double duration = 0.0;      // sweep length, seconds
    double elapsed = 0.0;       // protocol wall time, seconds
};

double bit_mismatch_rate(const BitSequence& a, const BitSequence& b);

// Plug-in entropy of an arbitrary symbol stream, in bits.
double entropy(const std::vector<std::uint32_t>& symbols);

// Entropy of the 2-bit code at code_index (1..12) of the wearable raw bits.
double entropy_per_code(const std::vector<TrialReport>& reports, std::size_t code_index);

// Entropy of bit key_bit (0-based) of the wearable reconciled key; reports without a key are skipped.
double entropy_per_key_bit(const std::vector<TrialReport>& reports, std::size_t key_bit);

// Plug-in estimate from the empirical joint distribution. Needs at least 100 symbols.
double mutual_information(const std::vector<std::uint32_t>& xs, const std::vector<std::uint32_t>& ys);

// Per-position bits of each sequence, concatenated in order.
std::vector<std::uint32_t> pooled_bits(const std::vector<BitSequence>& sequences);

double bit_rate(std::size_t secret_bits, double duration);

struct BitRates {
    std::optional<double> raw;
    std::optional<double> reconciled;
};

// Averaged over trials whose keys matched; absent when none did.
BitRates bit_rate(const std::vector<TrialReport>& reports);

double pearson_correlation(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace tag
