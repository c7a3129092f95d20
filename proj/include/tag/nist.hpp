#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "tag/bits.hpp"

namespace tag::nist {

inline constexpr double kSignificance = 0.01;

struct RandomnessVerdict {
    std::string test;
    double p_value = 0.0;
    bool pass = false;  // p_value >= kSignificance
};

// Individual tests follow NIST SP 800-22 rev. 1a. They accept any length the
// statistic is defined for; nist_battery applies the recommended minimums.
double frequency(const BitSequence& bits);
double block_frequency(const BitSequence& bits, std::size_t block_length);
double cumulative_sums(const BitSequence& bits, bool forward);
double runs(const BitSequence& bits);
double longest_run(const BitSequence& bits);  // n >= 128
double spectral(const BitSequence& bits);
double approximate_entropy(const BitSequence& bits, std::size_t m);
std::pair<double, double> serial(const BitSequence& bits, std::size_t m);

struct BatteryConfig {
    std::size_t block_length = 128;
    std::size_t approximate_entropy_m = 2;
    std::size_t serial_m = 2;
};

// Minimum sequence length the battery accepts for each test, in battery order.
std::vector<std::pair<std::string, std::size_t>> minimum_lengths(const BatteryConfig& cfg = {});

// Ten verdicts: Frequency, Block Frequency, Cumulative Sums (forward, backward),
// Runs, Longest Run, FFT, Approximate Entropy, Serial (two statistics).
std::vector<RandomnessVerdict> battery(const BitSequence& bits, const BatteryConfig& cfg = {});

}  // namespace tag::nist
