#pragma once

#include <string_view>

#include "tag/bits.hpp"
#include "tag/encoder.hpp"
#include "tag/vibration.hpp"

namespace tag {

enum class EavesdropperKind { acoustic, accelerometer };

const char* to_string(EavesdropperKind k);
EavesdropperKind parse_eavesdropper_kind(std::string_view s);

// c0 exp(-d / d0), normalised so coupling(1 inch) equals at_one_inch.
struct CouplingCurve {
    double at_one_inch;
    double length;  // d0 in inches
    double operator()(double distance) const;
};

CouplingCurve default_coupling();

struct EavesdropperConfig {
    EavesdropperKind kind = EavesdropperKind::accelerometer;
    double distance = 1.0;  // inches
    double ambient_noise_level = 0.0;
    CouplingCurve coupling = default_coupling();
};

EavesdropperConfig default_eavesdropper(EavesdropperKind kind, double distance);
void validate(const EavesdropperConfig& cfg);

// Acoustic: motor tone falling off as 1/distance plus ambient noise.
// Accelerometer: coupled contact-element response plus independent noise.
AccelTrace observe(const TrialScene& scene, const EavesdropperConfig& cfg, const CaptureWindow& window = {});

// Same chain the legitimate devices run.
BitSequence attack_pipeline(const AccelTrace& observation, const PipelineConfig& cfg = {});

}  // namespace tag
