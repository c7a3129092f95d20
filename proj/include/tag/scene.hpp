#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tag/vibration.hpp"

namespace tag {

enum class Posture { palm, fist, border, corner };
enum class TouchObject { cubic, phone, mouse, cup };

struct ScenePreset {
    Posture posture = Posture::palm;
    int location = 1;  // wristband position 1..5, 1 nearest the hand
    TouchObject object = TouchObject::cubic;
};

const char* to_string(Posture p);
const char* to_string(TouchObject o);
Posture parse_posture(std::string_view s);
TouchObject parse_object(std::string_view s);
std::string describe(const ScenePreset& preset);

double posture_noise_factor(Posture p);
double location_gain(int location);
double object_noise_factor(TouchObject o);
double object_damping(TouchObject o);

// Scene-wide noise levels shared by every study. Fitted once with
// `tagsim calibrate` against the overview no-reconciliation BMR.
struct NoiseModel {
    double sensor_sigma;
    double motion_artifact;
};
NoiseModel default_noise_model();

// Builds the grounded chain whose free-end driving-point receptance has the
// given resonances and antiresonances (Hz). Requires strict interlacing:
// r[0] < a[0] < r[1] < ... < a[n-2] < r[n-1].
MechSystem chain_from_spectra(const std::vector<double>& resonances_hz,
                              const std::vector<double>& antiresonances_hz, double damping_ratio);

struct SceneSpectra {
    std::vector<double> resonances_hz;
    std::vector<double> antiresonances_hz;
};
SceneSpectra sample_scene_spectra(Rng& rng);

TrialScene random_scene(std::uint64_t seed, const ScenePreset& preset = {});
TrialScene random_scene(std::uint64_t seed, const ScenePreset& preset, const NoiseModel& noise);

// 2-DoF system with k1=6, k2=3, m1=2, m2=1.
MechSystem example_system(double damping_ratio = 0.03);

}  // namespace tag
