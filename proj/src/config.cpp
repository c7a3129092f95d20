#include "tag/config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "tag/errors.hpp"

namespace tag {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

}  // namespace

KeyValueConfig KeyValueConfig::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read config file " + path);
    std::ostringstream s;
    s << f.rdbuf();
    return parse(s.str(), path);
}

KeyValueConfig KeyValueConfig::parse(std::string_view text, const std::string& origin) {
    KeyValueConfig cfg;
    cfg.origin_ = origin;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto end = text.find('\n', pos);
        std::string_view line = text.substr(pos, end == std::string_view::npos ? text.npos : end - pos);
        pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        const std::string content = trim(line);
        if (content.empty()) continue;
        const auto eq = content.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(std::string_view(content).substr(0, eq));
        if (key.empty()) throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty key");
        cfg.values_[key] = trim(std::string_view(content).substr(eq + 1));
    }
    return cfg;
}

std::optional<std::string> KeyValueConfig::get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

std::optional<double> KeyValueConfig::get_double(const std::string& key) const {
    const auto v = get(key);
    if (!v) return std::nullopt;
    char* end = nullptr;
    errno = 0;
    const double d = std::strtod(v->c_str(), &end);
    if (v->empty() || *end != '\0' || errno != 0)
        throw ConfigError(origin_ + ": " + key + " is not a number: " + *v);
    return d;
}

std::optional<long long> KeyValueConfig::get_int(const std::string& key) const {
    const auto v = get(key);
    if (!v) return std::nullopt;
    char* end = nullptr;
    errno = 0;
    const long long i = std::strtoll(v->c_str(), &end, 0);
    if (v->empty() || *end != '\0' || errno != 0)
        throw ConfigError(origin_ + ": " + key + " is not an integer: " + *v);
    return i;
}

std::optional<bool> KeyValueConfig::get_bool(const std::string& key) const {
    const auto v = get(key);
    if (!v) return std::nullopt;
    if (*v == "true" || *v == "1" || *v == "yes") return true;
    if (*v == "false" || *v == "0" || *v == "no") return false;
    throw ConfigError(origin_ + ": " + key + " is not a boolean: " + *v);
}

ScenePreset apply_preset_overrides(ScenePreset preset, const KeyValueConfig& cfg) {
    if (auto v = cfg.get("posture")) preset.posture = parse_posture(*v);
    if (auto v = cfg.get_int("location")) preset.location = static_cast<int>(*v);
    if (auto v = cfg.get("object")) preset.object = parse_object(*v);
    location_gain(preset.location);
    return preset;
}

void apply_scene_overrides(TrialScene& scene, const KeyValueConfig& cfg) {
    if (auto v = cfg.get_double("damping_ratio")) scene.system.damping_ratio = *v;
    if (auto v = cfg.get_double("duration")) scene.excitation.duration = *v;
    if (auto v = cfg.get_double("f_start")) scene.excitation.f_start = *v;
    if (auto v = cfg.get_double("f_end")) scene.excitation.f_end = *v;
    if (auto v = cfg.get_double("step_hz")) scene.excitation.step_hz = *v;
    if (auto v = cfg.get_double("dwell_per_step")) scene.excitation.dwell_per_step = *v;
    if (auto v = cfg.get_double("sample_rate")) scene.sample_rate = *v;
    if (auto v = cfg.get_double("wearable_gain")) scene.wearable_gain = *v;
    if (auto v = cfg.get_double("noise_sigma_wearable")) scene.noise_sigma_wearable = *v;
    if (auto v = cfg.get_double("noise_sigma_device")) scene.noise_sigma_device = *v;
    if (auto v = cfg.get_double("motion_artifact_amplitude")) scene.motion_artifact_amplitude = *v;
    validate(scene);
}

}  // namespace tag
