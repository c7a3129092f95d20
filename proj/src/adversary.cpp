#include "tag/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tag/calibration.hpp"
#include "tag/errors.hpp"
#include "tag/rng.hpp"

namespace tag {

const char* to_string(EavesdropperKind k) { return k == EavesdropperKind::acoustic ? "acoustic" : "accelerometer"; }

EavesdropperKind parse_eavesdropper_kind(std::string_view s) {
    if (s == "acoustic") return EavesdropperKind::acoustic;
    if (s == "accelerometer") return EavesdropperKind::accelerometer;
    throw ConfigError("unknown eavesdropper kind: " + std::string(s));
}

double CouplingCurve::operator()(double distance) const {
    return at_one_inch * std::exp(-(distance - 1.0) / length);
}

CouplingCurve default_coupling() { return {kDeskCouplingAtOneInch, kDeskCouplingLength}; }

EavesdropperConfig default_eavesdropper(EavesdropperKind kind, double distance) {
    EavesdropperConfig cfg;
    cfg.kind = kind;
    cfg.distance = distance;
    cfg.ambient_noise_level = kind == EavesdropperKind::acoustic ? kAcousticAmbientNoise : kEavesdropperNoise;
    return cfg;
}

void validate(const EavesdropperConfig& cfg) {
    if (!(cfg.distance > 0.0) || !std::isfinite(cfg.distance)) throw ConfigError("eavesdropper distance must be positive");
    if (!(cfg.ambient_noise_level >= 0.0)) throw ConfigError("ambient noise level must be non-negative");
    if (!(cfg.coupling.length > 0.0)) throw ConfigError("coupling length must be positive");
    if (!(cfg.coupling.at_one_inch >= 0.0 && cfg.coupling.at_one_inch <= 1.0))
        throw ConfigError("coupling at one inch must lie in [0, 1]");
}

AccelTrace observe(const TrialScene& scene, const EavesdropperConfig& cfg, const CaptureWindow& window) {
    validate(scene);
    validate(cfg);
    std::vector<double> x;
    if (cfg.kind == EavesdropperKind::acoustic) {
        x = excitation_force(scene, window);
        double peak = 0.0;
        for (double v : x) peak = std::max(peak, std::abs(v));
        const double scale = peak > 0.0 ? 1.0 / (peak * cfg.distance) : 0.0;
        for (double& v : x) v *= scale;
    } else {
        x = contact_response(scene, window);
        const double c = std::clamp(cfg.coupling(cfg.distance), 0.0, 1.0);
        for (double& v : x) v *= c;
    }
    Rng rng(derive_seed(scene.rng_seed, 2 * 3));
    for (double& v : x) v += cfg.ambient_noise_level * rng.normal();
    return AccelTrace{std::move(x), scene.sample_rate, Observer::eavesdropper};
}

BitSequence attack_pipeline(const AccelTrace& observation, const PipelineConfig& cfg) {
    return extract_bits(observation, cfg);
}

}  // namespace tag
