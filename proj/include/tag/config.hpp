#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "tag/scene.hpp"
#include "tag/vibration.hpp"

namespace tag {

// Plain-text `key = value` lines; `#` starts a comment, blank lines ignored.
class KeyValueConfig {
public:
    static KeyValueConfig load(const std::string& path);
    static KeyValueConfig parse(std::string_view text, const std::string& origin = "<string>");

    bool contains(const std::string& key) const { return values_.count(key) != 0; }
    std::optional<std::string> get(const std::string& key) const;
    std::optional<double> get_double(const std::string& key) const;
    std::optional<long long> get_int(const std::string& key) const;
    std::optional<bool> get_bool(const std::string& key) const;
    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
    std::string origin_;
};

// Keys: posture, location, object.
ScenePreset apply_preset_overrides(ScenePreset preset, const KeyValueConfig& cfg);

// Keys: damping_ratio, duration, f_start, f_end, step_hz, dwell_per_step, sample_rate,
// wearable_gain, noise_sigma_wearable, noise_sigma_device, motion_artifact_amplitude.
void apply_scene_overrides(TrialScene& scene, const KeyValueConfig& cfg);

}  // namespace tag
