#include "tag/study.hpp"

#include <cstdio>
#include <string>

#include "tag/calibration.hpp"
#include "tag/errors.hpp"
#include "tag/reconcile.hpp"
#include "tag/rng.hpp"
#include "tag/spectral.hpp"

namespace tag {

const char* to_string(StudyKind k) {
    switch (k) {
        case StudyKind::duration_sweep: return "duration_sweep";
        case StudyKind::wearing_location: return "wearing_location";
        case StudyKind::posture: return "posture";
        case StudyKind::objects: return "objects";
        case StudyKind::eavesdrop_distance_acoustic: return "eavesdrop_distance_acoustic";
        case StudyKind::eavesdrop_distance_accel: return "eavesdrop_distance_accel";
        case StudyKind::randomness: return "randomness";
        case StudyKind::overview: return "overview";
    }
    return "unknown";
}

std::vector<StudyKind> all_studies() {
    return {StudyKind::duration_sweep, StudyKind::wearing_location, StudyKind::posture,
            StudyKind::objects, StudyKind::eavesdrop_distance_acoustic, StudyKind::eavesdrop_distance_accel,
            StudyKind::randomness, StudyKind::overview};
}

StudyKind parse_study(std::string_view s) {
    for (auto k : all_studies()) {
        if (s == to_string(k)) return k;
    }
    throw ConfigError("unknown study: " + std::string(s));
}

void validate(const StudySpec& spec) {
    if (spec.trials_per_cell < 30) throw ConfigError("trials_per_cell must be at least 30");
    if (!(spec.noise.sensor_sigma >= 0.0) || !(spec.noise.motion_artifact >= 0.0))
        throw ConfigError("noise levels must be non-negative");
    if (spec.coupling && !(spec.coupling->length > 0.0)) throw ConfigError("coupling length must be positive");
}

std::uint64_t trial_seed(std::uint64_t base_seed, int trial) {
    return derive_seed(base_seed, 0x7000000000ULL + static_cast<std::uint64_t>(trial));
}

TrialReport run_trial(const TrialScene& scene, std::uint64_t seed, const std::string& cell) {
    TrialReport r;
    r.seed = seed;
    r.cell = cell;
    r.duration = scene.excitation.duration;
    const TrialOutcome out = run_pairing(scene);
    if (!out.history.empty() && !out.history[0].wearable_raw.empty() && !out.history[0].device_raw.empty()) {
        r.wearable_bits = out.history[0].wearable_raw;
        r.device_bits = out.history[0].device_raw;
    } else {
        const TrialScene first = attempt_scene(scene, 0);
        r.wearable_bits = extract_bits(synthesize_trace(first, Observer::wearable));
        r.device_bits = extract_bits(synthesize_trace(first, Observer::device));
    }
    const ReconciliationResult sent = sender_reconcile(r.wearable_bits);
    r.wearable_key = sent.secret_key;
    r.device_key = receiver_reconcile(r.device_bits, sent.delta);
    r.reconciled = true;
    r.keys_matched = r.wearable_key == r.device_key;
    r.paired = out.paired;
    r.fallback = out.fallback;
    r.attempts = out.attempts;
    r.elapsed = out.elapsed;
    return r;
}

CellSummary summarize(const std::string& study, const std::string& cell, const std::vector<TrialReport>& reports) {
    if (reports.empty()) throw ConfigError("cannot summarise an empty cell: " + cell);
    CellSummary s;
    s.study = study;
    s.cell = cell;
    s.trials = reports.size();
    std::size_t raw_err = 0;
    std::size_t raw_bits = 0;
    std::size_t key_err = 0;
    std::size_t key_bits = 0;
    std::size_t paired = 0;
    std::size_t attempts = 0;
    for (const auto& r : reports) {
        raw_err += hamming(r.wearable_bits, r.device_bits);
        raw_bits += r.wearable_bits.size();
        key_err += hamming(r.wearable_key, r.device_key);
        key_bits += r.wearable_key.size();
        paired += r.paired;
        attempts += static_cast<std::size_t>(r.attempts);
    }
    const double n = static_cast<double>(reports.size());
    s.bmr_raw = static_cast<double>(raw_err) / static_cast<double>(raw_bits);
    s.bmr_reconciled = key_bits ? static_cast<double>(key_err) / static_cast<double>(key_bits) : 0.0;
    s.success_rate = static_cast<double>(paired) / n;
    s.mean_attempts = static_cast<double>(attempts) / n;
    const BitRates rates = bit_rate(reports);
    s.bit_rate_raw = rates.raw;
    s.bit_rate_reconciled = rates.reconciled;
    return s;
}

namespace {

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

struct Cell {
    std::string label;
    ScenePreset preset;
    double duration = 1.75;
    std::optional<EavesdropperConfig> eavesdropper;
};

std::vector<Cell> cells_for(const StudySpec& spec) {
    std::vector<Cell> cells;
    auto eavesdropper = [&](EavesdropperKind kind, double d) {
        EavesdropperConfig cfg = default_eavesdropper(kind, d);
        if (kind == EavesdropperKind::acoustic && spec.acoustic_noise >= 0.0) cfg.ambient_noise_level = spec.acoustic_noise;
        if (kind == EavesdropperKind::accelerometer && spec.eavesdropper_noise >= 0.0)
            cfg.ambient_noise_level = spec.eavesdropper_noise;
        if (spec.coupling) cfg.coupling = *spec.coupling;
        return cfg;
    };
    switch (spec.study) {
        case StudyKind::duration_sweep:
            for (double d : kDurationGrid) cells.push_back({format_number(d), {}, d, std::nullopt});
            break;
        case StudyKind::wearing_location:
            for (int loc = 1; loc <= 5; ++loc) {
                ScenePreset p;
                p.location = loc;
                cells.push_back({std::to_string(loc), p, 1.75, std::nullopt});
            }
            break;
        case StudyKind::posture:
            for (auto posture : {Posture::palm, Posture::fist, Posture::border, Posture::corner}) {
                ScenePreset p;
                p.posture = posture;
                cells.push_back({to_string(posture), p, 1.75, std::nullopt});
            }
            break;
        case StudyKind::objects:
            for (auto object : {TouchObject::cubic, TouchObject::phone, TouchObject::mouse, TouchObject::cup}) {
                ScenePreset p;
                p.object = object;
                cells.push_back({to_string(object), p, 1.75, std::nullopt});
            }
            break;
        case StudyKind::eavesdrop_distance_acoustic:
            for (double d : kAcousticDistances)
                cells.push_back({format_number(d), {}, 1.75, eavesdropper(EavesdropperKind::acoustic, d)});
            break;
        case StudyKind::eavesdrop_distance_accel:
            for (double d : kAccelerometerDistances)
                cells.push_back({format_number(d), {}, 1.75, eavesdropper(EavesdropperKind::accelerometer, d)});
            break;
        case StudyKind::randomness:
        case StudyKind::overview:
            cells.push_back({"all", {}, 1.75, std::nullopt});
            break;
    }
    return cells;
}

std::vector<double> smoothed(const AccelTrace& trace) { return smooth(spectrum(trace)).magnitudes; }

}  // namespace

StudyResult run_study(const StudySpec& spec) {
    validate(spec);
    StudyResult result;
    result.spec = spec;
    const std::string study = to_string(spec.study);
    for (const Cell& cell : cells_for(spec)) {
        std::vector<TrialReport> reports;
        std::vector<BitSequence> attacker;
        std::vector<BitSequence> wearable;
        std::vector<BitSequence> device;
        double corr_legit = 0.0;
        double corr_attacker = 0.0;
        for (int t = 0; t < spec.trials_per_cell; ++t) {
            const std::uint64_t seed = trial_seed(spec.base_seed, t);
            TrialScene scene = random_scene(seed, cell.preset, spec.noise);
            scene.excitation.duration = cell.duration;
            TrialReport r = run_trial(scene, seed, cell.label);
            r.preset = describe(cell.preset);
            if (cell.eavesdropper) {
                const TrialScene first = attempt_scene(scene, 0);
                const AccelTrace seen = observe(first, *cell.eavesdropper);
                r.attacker_bits = attack_pipeline(seen);
                attacker.push_back(r.attacker_bits);
                wearable.push_back(r.wearable_bits);
                device.push_back(r.device_bits);
                const auto sw = smoothed(synthesize_trace(first, Observer::wearable));
                const auto sd = smoothed(synthesize_trace(first, Observer::device));
                corr_legit += pearson_correlation(sw, sd);
                corr_attacker += pearson_correlation(smoothed(seen), sd);
            }
            reports.push_back(std::move(r));
        }
        CellSummary s = summarize(study, cell.label, reports);
        if (cell.eavesdropper) {
            const auto pa = pooled_bits(attacker);
            s.mi_wearable = mutual_information(pa, pooled_bits(wearable));
            s.mi_device = mutual_information(pa, pooled_bits(device));
            std::size_t err = 0;
            for (std::size_t i = 0; i < attacker.size(); ++i) err += hamming(attacker[i], device[i]);
            s.attacker_bmr = static_cast<double>(err) / static_cast<double>(pa.size());
            s.spectrum_corr_legit = corr_legit / spec.trials_per_cell;
            s.spectrum_corr_attacker = corr_attacker / spec.trials_per_cell;
        }
        result.cells.push_back(std::move(s));
        result.trials.insert(result.trials.end(), std::make_move_iterator(reports.begin()),
                             std::make_move_iterator(reports.end()));
    }
    for (std::size_t c = 1; c <= 12; ++c) result.code_entropy.push_back(entropy_per_code(result.trials, c));
    std::vector<TrialReport> matched;
    for (const auto& r : result.trials) {
        if (r.keys_matched) matched.push_back(r);
    }
    if (!matched.empty()) {
        for (std::size_t b = 0; b < 12; ++b) result.key_bit_entropy.push_back(entropy_per_key_bit(matched, b));
    }
    if (spec.study == StudyKind::randomness) {
        BitSequence keys;
        for (const auto& r : matched) keys.insert(keys.end(), r.wearable_key.begin(), r.wearable_key.end());
        result.randomness_bits = keys.size();
        result.randomness = nist::battery(keys);
    }
    return result;
}

}  // namespace tag
