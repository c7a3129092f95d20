#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tag/adversary.hpp"
#include "tag/metrics.hpp"
#include "tag/nist.hpp"
#include "tag/protocol.hpp"
#include "tag/scene.hpp"

namespace tag {

enum class StudyKind {
    duration_sweep,
    wearing_location,
    posture,
    objects,
    eavesdrop_distance_acoustic,
    eavesdrop_distance_accel,
    randomness,
    overview,
};

const char* to_string(StudyKind k);
StudyKind parse_study(std::string_view s);
std::vector<StudyKind> all_studies();

struct StudySpec {
    StudyKind study = StudyKind::overview;
    int trials_per_cell = 30;
    std::uint64_t base_seed = 1;
    std::string output_path;  // directory, relative to the CLI --out root
    NoiseModel noise = default_noise_model();
    double eavesdropper_noise = -1.0;  // negative keeps the calibrated default
    double acoustic_noise = -1.0;
    std::optional<CouplingCurve> coupling;
};

void validate(const StudySpec& spec);

inline constexpr double kDurationGrid[] = {0.75, 1.0, 1.25, 1.5, 1.75, 2.0};
inline constexpr double kAcousticDistances[] = {1.0, 3.0, 6.0, 12.0, 24.0, 36.0};
inline constexpr double kAccelerometerDistances[] = {1.0, 2.0, 3.0, 5.0, 7.0, 9.0, 11.0};

struct CellSummary {
    std::string study;
    std::string cell;
    std::size_t trials = 0;
    double bmr_raw = 0.0;          // 24-bit sequences from the first capture
    double bmr_reconciled = 0.0;   // 12-bit keys from the first capture
    double success_rate = 0.0;     // full protocol, retries included
    double mean_attempts = 0.0;
    std::optional<double> bit_rate_raw;
    std::optional<double> bit_rate_reconciled;
    std::optional<double> mi_wearable;  // attacker vs wearable, pooled per-position bits
    std::optional<double> mi_device;
    std::optional<double> attacker_bmr;  // attacker vs device raw bits
    std::optional<double> spectrum_corr_legit;     // mean per-trial smoothed-spectrum correlation
    std::optional<double> spectrum_corr_attacker;  // attacker vs device
};

struct StudyResult {
    StudySpec spec;
    std::vector<TrialReport> trials;  // grouped by cell, seed order within a cell
    std::vector<CellSummary> cells;
    std::vector<double> code_entropy;     // codes 1..12, over all trials
    std::vector<double> key_bit_entropy;  // key bits 1..12, over trials with matching keys
    std::vector<nist::RandomnessVerdict> randomness;  // randomness study only
    std::size_t randomness_bits = 0;
};

// Scene seed for trial i; identical across cells so cells compare the same scenes.
std::uint64_t trial_seed(std::uint64_t base_seed, int trial);

// One legitimate trial: first-capture bits and keys plus the full protocol run.
TrialReport run_trial(const TrialScene& scene, std::uint64_t seed, const std::string& cell);

StudyResult run_study(const StudySpec& spec);

CellSummary summarize(const std::string& study, const std::string& cell, const std::vector<TrialReport>& reports);

}  // namespace tag
