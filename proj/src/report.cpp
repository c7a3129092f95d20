#include "tag/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "json.hpp"

#include "tag/errors.hpp"

namespace tag {

namespace fs = std::filesystem;

ReportFormat parse_report_format(std::string_view s) {
    if (s == "csv") return ReportFormat::csv;
    if (s == "json") return ReportFormat::json;
    throw ConfigError("unknown report format: " + std::string(s));
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

nlohmann::json opt_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + path.string() + " for writing");
    f << content;
    f.close();
    if (!f) throw IoError("failed writing " + path.string());
}

fs::path prepare_dir(const std::string& out_dir) {
    const fs::path dir(out_dir.empty() ? "." : out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    return dir;
}

bool has_distance(const StudyResult& r) {
    return r.spec.study == StudyKind::eavesdrop_distance_acoustic || r.spec.study == StudyKind::eavesdrop_distance_accel;
}

std::vector<std::string> write_csv(const StudyResult& r, const fs::path& dir) {
    const std::string study = to_string(r.spec.study);
    const std::string base = std::to_string(r.spec.base_seed);
    std::vector<std::string> written;

    std::ostringstream t;
    t << "study,cell,seed,preset,duration,wearable_bits,device_bits,attacker_bits,wearable_key,device_key,"
         "keys_matched,paired,fallback,attempts,elapsed\n";
    for (const auto& x : r.trials) {
        t << study << ',' << x.cell << ',' << x.seed << ',' << x.preset << ',' << format_double(x.duration) << ','
          << to_string(x.wearable_bits) << ',' << to_string(x.device_bits) << ',' << to_string(x.attacker_bits) << ','
          << to_string(x.wearable_key) << ',' << to_string(x.device_key) << ',' << x.keys_matched << ',' << x.paired
          << ',' << x.fallback << ',' << x.attempts << ',' << format_double(x.elapsed) << '\n';
    }
    written.push_back((dir / (study + "_trials.csv")).string());
    write_file(written.back(), t.str());

    std::ostringstream c;
    c << "study,cell,base_seed,trials,bmr_raw,bmr_reconciled,success_rate,mean_attempts,bit_rate_raw,"
         "bit_rate_reconciled,mi_wearable,mi_device,attacker_bmr,spectrum_corr_legit,spectrum_corr_attacker\n";
    for (const auto& s : r.cells) {
        c << s.study << ',' << s.cell << ',' << base << ',' << s.trials << ',' << format_double(s.bmr_raw) << ','
          << format_double(s.bmr_reconciled) << ',' << format_double(s.success_rate) << ','
          << format_double(s.mean_attempts) << ',' << opt(s.bit_rate_raw) << ',' << opt(s.bit_rate_reconciled) << ','
          << opt(s.mi_wearable) << ',' << opt(s.mi_device) << ',' << opt(s.attacker_bmr) << ','
          << opt(s.spectrum_corr_legit) << ',' << opt(s.spectrum_corr_attacker) << '\n';
    }
    written.push_back((dir / (study + "_cells.csv")).string());
    write_file(written.back(), c.str());

    std::ostringstream e;
    e << "study,base_seed,kind,index,entropy\n";
    for (std::size_t i = 0; i < r.code_entropy.size(); ++i)
        e << study << ',' << base << ",code," << i + 1 << ',' << format_double(r.code_entropy[i]) << '\n';
    for (std::size_t i = 0; i < r.key_bit_entropy.size(); ++i)
        e << study << ',' << base << ",key_bit," << i + 1 << ',' << format_double(r.key_bit_entropy[i]) << '\n';
    written.push_back((dir / (study + "_entropy.csv")).string());
    write_file(written.back(), e.str());

    if (has_distance(r)) {
        std::ostringstream d;
        d << "distance,base_seed,mi_wearable,mi_device,attacker_bmr\n";
        for (const auto& s : r.cells)
            d << s.cell << ',' << base << ',' << opt(s.mi_wearable) << ',' << opt(s.mi_device) << ','
              << opt(s.attacker_bmr) << '\n';
        written.push_back((dir / (study + "_distance.csv")).string());
        write_file(written.back(), d.str());
    }
    if (!r.randomness.empty()) {
        std::ostringstream n;
        n << "test,base_seed,bits,p_value,pass\n";
        for (const auto& v : r.randomness)
            n << v.test << ',' << base << ',' << r.randomness_bits << ',' << format_double(v.p_value) << ',' << v.pass
              << '\n';
        written.push_back((dir / (study + "_nist.csv")).string());
        write_file(written.back(), n.str());
    }
    return written;
}

std::vector<std::string> write_json(const StudyResult& r, const fs::path& dir) {
    using nlohmann::json;
    const std::string study = to_string(r.spec.study);
    json j;
    j["spec"] = {{"study", study},
                 {"trials_per_cell", r.spec.trials_per_cell},
                 {"base_seed", r.spec.base_seed},
                 {"sensor_sigma", r.spec.noise.sensor_sigma},
                 {"motion_artifact", r.spec.noise.motion_artifact}};
    json cells = json::array();
    for (const auto& s : r.cells) {
        cells.push_back({{"cell", s.cell},
                         {"trials", s.trials},
                         {"bmr_raw", s.bmr_raw},
                         {"bmr_reconciled", s.bmr_reconciled},
                         {"success_rate", s.success_rate},
                         {"mean_attempts", s.mean_attempts},
                         {"bit_rate_raw", opt_json(s.bit_rate_raw)},
                         {"bit_rate_reconciled", opt_json(s.bit_rate_reconciled)},
                         {"mi_wearable", opt_json(s.mi_wearable)},
                         {"mi_device", opt_json(s.mi_device)},
                         {"attacker_bmr", opt_json(s.attacker_bmr)},
                         {"spectrum_corr_legit", opt_json(s.spectrum_corr_legit)},
                         {"spectrum_corr_attacker", opt_json(s.spectrum_corr_attacker)}});
    }
    j["cells"] = std::move(cells);
    json trials = json::array();
    for (const auto& x : r.trials) {
        trials.push_back({{"cell", x.cell},
                          {"seed", x.seed},
                          {"preset", x.preset},
                          {"duration", x.duration},
                          {"wearable_bits", to_string(x.wearable_bits)},
                          {"device_bits", to_string(x.device_bits)},
                          {"attacker_bits", to_string(x.attacker_bits)},
                          {"wearable_key", to_string(x.wearable_key)},
                          {"device_key", to_string(x.device_key)},
                          {"keys_matched", x.keys_matched},
                          {"paired", x.paired},
                          {"fallback", x.fallback},
                          {"attempts", x.attempts},
                          {"elapsed", x.elapsed}});
    }
    j["trials"] = std::move(trials);
    j["code_entropy"] = r.code_entropy;
    j["key_bit_entropy"] = r.key_bit_entropy;
    json nist = json::array();
    for (const auto& v : r.randomness) nist.push_back({{"test", v.test}, {"p_value", v.p_value}, {"pass", v.pass}});
    j["randomness"] = std::move(nist);
    j["randomness_bits"] = r.randomness_bits;
    const std::string path = (dir / (study + ".json")).string();
    write_file(path, j.dump(2) + "\n");
    return {path};
}

}  // namespace

std::vector<std::string> emit_report(const StudyResult& result, const std::string& out_dir, ReportFormat format) {
    if (result.trials.empty() || result.cells.empty()) throw ConfigError("nothing to report: no trials in the result");
    const fs::path dir = prepare_dir(out_dir);
    return format == ReportFormat::csv ? write_csv(result, dir) : write_json(result, dir);
}

std::vector<std::string> emit_reports(const StudyResult& result, const std::string& out_dir) {
    auto paths = emit_report(result, out_dir, ReportFormat::csv);
    const auto j = emit_report(result, out_dir, ReportFormat::json);
    paths.insert(paths.end(), j.begin(), j.end());
    return paths;
}

void write_trace_csv(const AccelTrace& trace, const std::string& path) {
    std::ostringstream s;
    s << "time_s,accel_magnitude\n";
    for (std::size_t i = 0; i < trace.samples.size(); ++i)
        s << format_double(static_cast<double>(i) / trace.sample_rate) << ',' << format_double(trace.samples[i]) << '\n';
    write_file(path, s.str());
}

}  // namespace tag
