#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tag/adversary.hpp"
#include "tag/calibration.hpp"
#include "tag/config.hpp"
#include "tag/metrics.hpp"
#include "tag/nist.hpp"
#include "tag/protocol.hpp"
#include "tag/reconcile.hpp"
#include "tag/report.hpp"
#include "tag/rng.hpp"
#include "tag/scene.hpp"
#include "tag/spectral.hpp"
#include "tag/study.hpp"

namespace fs = std::filesystem;
using namespace tag;

namespace {

struct Options {
    std::uint64_t seed = 1;
    std::string out = "out";
    std::string config;
    bool check = false;

    std::string posture = "palm";
    int location = 1;
    std::string object = "cubic";
    double duration = 1.75;

    double loss = 0.0;
    double corrupt = 0.0;
    double latency = 0.01;
    bool tamper_delta = false;
    bool jam_delta = false;

    std::string kind = "accelerometer";
    double distance = 1.0;
    int trials = 30;

    std::string study = "all";
    std::string format = "both";

    std::string input;
    std::size_t random_bits = 0;

    std::string sigma_grid = "0.0004,0.0005,0.0006,0.0007,0.0008,0.0009,0.001";
    std::string attacker_grid = "0.005,0.01,0.02,0.05";
    double motion = kMotionArtifactAmplitude;
};

void apply_config(Options& o, const KeyValueConfig& cfg) {
    if (auto v = cfg.get_int("seed")) o.seed = static_cast<std::uint64_t>(*v);
    if (auto v = cfg.get("out")) o.out = *v;
    if (auto v = cfg.get_bool("check")) o.check = *v;
    if (auto v = cfg.get("posture")) o.posture = *v;
    if (auto v = cfg.get_int("location")) o.location = static_cast<int>(*v);
    if (auto v = cfg.get("object")) o.object = *v;
    if (auto v = cfg.get_double("duration")) o.duration = *v;
    if (auto v = cfg.get_double("loss")) o.loss = *v;
    if (auto v = cfg.get_double("corrupt")) o.corrupt = *v;
    if (auto v = cfg.get_double("latency")) o.latency = *v;
    if (auto v = cfg.get_bool("tamper_delta")) o.tamper_delta = *v;
    if (auto v = cfg.get_bool("jam_delta")) o.jam_delta = *v;
    if (auto v = cfg.get("kind")) o.kind = *v;
    if (auto v = cfg.get_double("distance")) o.distance = *v;
    if (auto v = cfg.get_int("trials")) o.trials = static_cast<int>(*v);
    if (auto v = cfg.get("study")) o.study = *v;
    if (auto v = cfg.get("format")) o.format = *v;
    if (auto v = cfg.get("input")) o.input = *v;
    if (auto v = cfg.get_int("random_bits")) o.random_bits = static_cast<std::size_t>(*v);
    if (auto v = cfg.get("sigma_grid")) o.sigma_grid = *v;
    if (auto v = cfg.get("attacker_grid")) o.attacker_grid = *v;
    if (auto v = cfg.get_double("motion")) o.motion = *v;
}

ScenePreset preset_of(const Options& o) {
    ScenePreset p;
    p.posture = parse_posture(o.posture);
    p.location = o.location;
    p.object = parse_object(o.object);
    location_gain(p.location);
    return p;
}

TrialScene scene_of(const Options& o, const KeyValueConfig* cfg) {
    TrialScene scene = random_scene(o.seed, preset_of(o));
    scene.excitation.duration = o.duration;
    if (cfg) apply_scene_overrides(scene, *cfg);
    validate(scene);
    return scene;
}

std::string out_path(const Options& o, const std::string& name) {
    fs::create_directories(o.out);
    return (fs::path(o.out) / name).string();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + path + " for writing");
    f << text;
}

std::string extrema_line(const std::vector<Extremum>& xs) {
    std::ostringstream s;
    for (std::size_t i = 0; i < xs.size(); ++i) s << (i ? " " : "") << format_double(xs[i].frequency);
    return s.str();
}

struct Check {
    std::string name;
    bool pass;
    std::string detail;
};

int report_checks(const std::vector<Check>& checks) {
    int failed = 0;
    for (const auto& c : checks) {
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
        failed += !c.pass;
    }
    return failed ? 1 : 0;
}

std::vector<Check> study_checks(const StudyResult& r) {
    std::vector<Check> out;
    auto pct = [](double v) { return format_double(100.0 * v) + "%"; };
    switch (r.spec.study) {
        case StudyKind::overview: {
            const auto& c = r.cells.front();
            out.push_back({"overview raw BMR in [1%, 3%]", c.bmr_raw >= 0.01 && c.bmr_raw <= 0.03, pct(c.bmr_raw)});
            out.push_back({"overview reconciled BMR <= 0.5%", c.bmr_reconciled <= 0.005, pct(c.bmr_reconciled)});
            out.push_back({"overview success >= 95%", c.success_rate >= 0.95, pct(c.success_rate)});
            out.push_back({"overview mean attempts <= 1.1", c.mean_attempts <= 1.1, format_double(c.mean_attempts)});
            break;
        }
        case StudyKind::duration_sweep: {
            bool monotone = true;
            double biggest = -1.0;
            double knee = 0.0;
            std::string detail;
            for (std::size_t i = 0; i < r.cells.size(); ++i) {
                detail += r.cells[i].cell + "s:" + pct(r.cells[i].bmr_raw) + " ";
                if (i == 0) continue;
                const double drop = r.cells[i - 1].bmr_raw - r.cells[i].bmr_raw;
                if (drop < 0.0) monotone = false;
                if (drop > biggest) biggest = drop, knee = kDurationGrid[i];
            }
            out.push_back({"duration BMR nonincreasing", monotone, detail});
            out.push_back({"duration largest drop by 1.75 s", knee <= 1.75, "ends at " + format_double(knee) + " s"});
            break;
        }
        case StudyKind::wearing_location: {
            double worst = 0.0;
            for (const auto& c : r.cells) worst = std::max(worst, c.bmr_reconciled);
            out.push_back({"location reconciled BMR <= 1.7%", worst <= 0.017, "max " + pct(worst)});
            break;
        }
        case StudyKind::posture: {
            const double good = std::max(r.cells[0].bmr_raw, r.cells[1].bmr_raw);
            const double bad = std::min(r.cells[2].bmr_raw, r.cells[3].bmr_raw);
            out.push_back({"{palm, fist} below {border, corner}", good < bad, pct(good) + " < " + pct(bad)});
            break;
        }
        case StudyKind::objects: {
            double raw = 0.0;
            double rec = 0.0;
            for (const auto& c : r.cells) {
                raw = std::max(raw, c.bmr_raw);
                rec = std::max(rec, c.bmr_reconciled);
            }
            out.push_back({"objects raw BMR < 5%", raw < 0.05, "max " + pct(raw)});
            out.push_back({"objects reconciled BMR < 0.5%", rec < 0.005, "max " + pct(rec)});
            break;
        }
        case StudyKind::eavesdrop_distance_acoustic: {
            double mi = 0.0;
            for (const auto& c : r.cells) mi = std::max({mi, *c.mi_wearable, *c.mi_device});
            out.push_back({"acoustic MI < 0.01", mi < 0.01, "max " + format_double(mi)});
            break;
        }
        case StudyKind::eavesdrop_distance_accel: {
            const auto& one = r.cells.front();
            out.push_back({"accelerometer MI(1 inch) in [0.30, 0.46]",
                           *one.mi_device >= 0.30 && *one.mi_device <= 0.46, format_double(*one.mi_device)});
            for (const auto& c : r.cells) {
                if (std::stod(c.cell) < 3.0) continue;
                out.push_back({"accelerometer MI(" + c.cell + " in) < 0.15", *c.mi_device < 0.15,
                               format_double(*c.mi_device)});
                out.push_back({"accelerometer BMR(" + c.cell + " in) >= 40%", *c.attacker_bmr >= 0.40,
                               pct(*c.attacker_bmr)});
            }
            break;
        }
        case StudyKind::randomness:
            for (const auto& v : r.randomness)
                out.push_back({"NIST " + v.test, v.pass, "p=" + format_double(v.p_value)});
            break;
    }
    return out;
}

int cmd_simulate(const Options& o, const KeyValueConfig* cfg) {
    const TrialScene scene = scene_of(o, cfg);
    const std::string stem = "simulate_" + std::to_string(o.seed);
    for (Observer obs : {Observer::wearable, Observer::device}) {
        const AccelTrace trace = synthesize_trace(scene, obs);
        const std::string name = to_string(obs);
        write_trace_csv(trace, out_path(o, stem + "_" + name + "_trace.csv"));
        const FrequencySpectrum spec = smooth(spectrum(trace));
        write_spectrum_csv(spec, out_path(o, stem + "_" + name + "_spectrum.csv"));
        const ExtremaSet ex = detect_extrema(spec);
        std::cout << name << " resonances_hz: " << extrema_line(ex.resonances) << "\n"
                  << name << " antiresonances_hz: " << extrema_line(ex.antiresonances) << "\n"
                  << name << " bits: " << to_string(encode(ex)) << "\n";
    }
    std::cout << "natural_frequencies_hz:";
    for (double w : natural_frequencies(scene.system)) std::cout << " " << format_double(w / (2.0 * std::numbers::pi));
    std::cout << "\n";
    return 0;
}

int cmd_pair(const Options& o, const KeyValueConfig* cfg) {
    const TrialScene scene = scene_of(o, cfg);
    ChannelModel channel;
    channel.seed = o.seed;
    channel.loss_probability = o.loss;
    channel.corrupt_probability = o.corrupt;
    channel.latency = o.latency;
    if (o.tamper_delta || o.jam_delta) {
        const bool tamper = o.tamper_delta;
        channel.intercept = [tamper](Role, const std::vector<std::uint8_t>& frame)
            -> std::optional<std::vector<std::uint8_t>> {
            if (frame.size() > 3 && frame[3] == static_cast<std::uint8_t>(MessageType::delta)) {
                if (!tamper) return std::nullopt;
                auto f = frame;
                f[5] ^= 0x10;
                return f;
            }
            return frame;
        };
    }
    const TrialOutcome out = run_pairing(scene, channel);
    nlohmann::json j{{"seed", o.seed},
                     {"paired", out.paired},
                     {"fallback", out.fallback},
                     {"attempts", out.attempts},
                     {"failure", to_string(out.failure)},
                     {"elapsed", out.elapsed},
                     {"wearable_key", out.wearable_key ? to_string(*out.wearable_key) : ""},
                     {"device_key", out.device_key ? to_string(*out.device_key) : ""},
                     {"frames", out.transcript.size()}};
    nlohmann::json hist = nlohmann::json::array();
    for (const auto& h : out.history) {
        hist.push_back({{"wearable_raw", to_string(h.wearable_raw)},
                        {"device_raw", to_string(h.device_raw)},
                        {"outcome", to_string(h.outcome)}});
    }
    j["history"] = hist;
    const std::string text = j.dump(2) + "\n";
    write_text(out_path(o, "pair_" + std::to_string(o.seed) + ".json"), text);
    std::cout << text;
    if (o.check) return report_checks({{"paired", out.paired, to_string(out.failure)}});
    return 0;
}

int cmd_attack(const Options& o) {
    if (o.trials < 5) throw ConfigError("attack needs at least 5 trials for the MI estimator");
    const EavesdropperConfig ecfg = default_eavesdropper(parse_eavesdropper_kind(o.kind), o.distance);
    std::vector<BitSequence> att, wear, dev;
    std::ostringstream csv;
    csv << "seed,wearable_bits,device_bits,attacker_bits\n";
    for (int t = 0; t < o.trials; ++t) {
        const std::uint64_t seed = trial_seed(o.seed, t);
        TrialScene scene = random_scene(seed, preset_of(o));
        scene.excitation.duration = o.duration;
        att.push_back(attack_pipeline(observe(scene, ecfg)));
        wear.push_back(extract_bits(synthesize_trace(scene, Observer::wearable)));
        dev.push_back(extract_bits(synthesize_trace(scene, Observer::device)));
        csv << seed << ',' << to_string(wear.back()) << ',' << to_string(dev.back()) << ',' << to_string(att.back())
            << '\n';
    }
    write_text(out_path(o, "attack_" + o.kind + "_" + format_double(o.distance) + ".csv"), csv.str());
    const auto pa = pooled_bits(att);
    const double mi_w = mutual_information(pa, pooled_bits(wear));
    const double mi_d = mutual_information(pa, pooled_bits(dev));
    std::size_t err = 0;
    for (std::size_t i = 0; i < att.size(); ++i) err += hamming(att[i], dev[i]);
    const double bmr = static_cast<double>(err) / static_cast<double>(pa.size());
    std::cout << "kind=" << o.kind << " distance=" << format_double(o.distance) << " mi_wearable=" << format_double(mi_w)
              << " mi_device=" << format_double(mi_d) << " attacker_bmr=" << format_double(bmr) << "\n";
    if (!o.check) return 0;
    if (ecfg.kind == EavesdropperKind::acoustic) return report_checks({{"acoustic MI < 0.01", mi_d < 0.01, format_double(mi_d)}});
    if (o.distance >= 3.0)
        return report_checks({{"accelerometer MI < 0.15", mi_d < 0.15, format_double(mi_d)},
                              {"accelerometer BMR >= 40%", bmr >= 0.40, format_double(bmr)}});
    return 0;
}

int cmd_study(const Options& o) {
    std::vector<StudyKind> kinds;
    if (o.study == "all") {
        kinds = all_studies();
    } else {
        kinds.push_back(parse_study(o.study));
    }
    int status = 0;
    for (StudyKind k : kinds) {
        StudySpec spec;
        spec.study = k;
        spec.trials_per_cell = o.trials;
        spec.base_seed = o.seed;
        spec.output_path = o.out;
        const StudyResult r = run_study(spec);
        std::vector<std::string> paths;
        if (o.format == "both") {
            paths = emit_reports(r, o.out);
        } else {
            paths = emit_report(r, o.out, parse_report_format(o.format));
        }
        for (const auto& c : r.cells) {
            std::cout << to_string(k) << " " << c.cell << ": bmr_raw=" << format_double(c.bmr_raw)
                      << " bmr_reconciled=" << format_double(c.bmr_reconciled)
                      << " success=" << format_double(c.success_rate);
            if (c.mi_device) std::cout << " mi_device=" << format_double(*c.mi_device);
            if (c.attacker_bmr) std::cout << " attacker_bmr=" << format_double(*c.attacker_bmr);
            std::cout << "\n";
        }
        for (const auto& p : paths) std::cout << "wrote " << p << "\n";
        if (o.check) status |= report_checks(study_checks(r));
    }
    return status;
}

BitSequence read_bits(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot read " + path);
    BitSequence bits;
    char c = 0;
    while (f.get(c)) {
        if (c == '0' || c == '1') {
            bits.push_back(static_cast<std::uint8_t>(c - '0'));
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            throw ConfigError(path + ": non-binary character in bit file");
        }
    }
    return bits;
}

int cmd_nist(const Options& o) {
    BitSequence bits;
    if (!o.input.empty()) {
        bits = read_bits(o.input);
    } else if (o.random_bits > 0) {
        Rng rng(o.seed);
        for (std::size_t i = 0; i < o.random_bits; ++i) bits.push_back(static_cast<std::uint8_t>(rng.next() >> 63));
    } else {
        throw ConfigError("nist needs --input or --random-bits");
    }
    std::vector<Check> checks;
    for (const auto& v : nist::battery(bits)) {
        std::cout << v.test << "," << format_double(v.p_value) << "," << (v.pass ? "pass" : "fail") << "\n";
        checks.push_back({"NIST " + v.test, v.pass, "p=" + format_double(v.p_value)});
    }
    if (o.check) return report_checks(checks);
    return 0;
}

int cmd_report(const Options& o) {
    std::vector<fs::path> files;
    if (!fs::exists(o.out)) throw IoError("output directory " + o.out + " does not exist");
    for (const auto& e : fs::directory_iterator(o.out)) {
        if (e.path().extension() == ".json" && e.path().filename().string().rfind("pair_", 0) != 0)
            files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    std::ostringstream csv;
    csv << "study,cell,base_seed,trials,bmr_raw,bmr_reconciled,success_rate,mean_attempts\n";
    std::size_t rows = 0;
    for (const auto& p : files) {
        std::ifstream f(p);
        nlohmann::json j;
        try {
            f >> j;
        } catch (const nlohmann::json::exception& e) {
            throw IoError(p.string() + ": " + e.what());
        }
        if (!j.contains("cells") || !j.contains("spec")) continue;
        for (const auto& c : j["cells"]) {
            csv << j["spec"]["study"].get<std::string>() << ',' << c["cell"].get<std::string>() << ','
                << j["spec"]["base_seed"].get<std::uint64_t>() << ',' << c["trials"].get<std::size_t>() << ','
                << format_double(c["bmr_raw"].get<double>()) << ',' << format_double(c["bmr_reconciled"].get<double>())
                << ',' << format_double(c["success_rate"].get<double>()) << ','
                << format_double(c["mean_attempts"].get<double>()) << '\n';
            ++rows;
        }
    }
    if (rows == 0) throw ConfigError("no study JSON files found in " + o.out);
    const std::string path = out_path(o, "summary.csv");
    write_text(path, csv.str());
    std::cout << csv.str() << "wrote " << path << "\n";
    return 0;
}

std::vector<double> parse_grid(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    if (out.empty()) throw ConfigError("empty grid");
    return out;
}

int cmd_calibrate(const Options& o) {
    std::ostringstream csv;
    csv << "kind,parameter,value,bmr_raw,bmr_reconciled,success_rate,mi_1in,mi_3in,bmr_3in\n";
    StudySpec spec;
    spec.study = StudyKind::overview;
    spec.trials_per_cell = o.trials;
    spec.base_seed = o.seed;
    for (double sigma : parse_grid(o.sigma_grid)) {
        spec.noise = {sigma, o.motion};
        const StudyResult r = run_study(spec);
        const auto& c = r.cells.front();
        std::cout << "sensor_sigma=" << format_double(sigma) << " bmr_raw=" << format_double(c.bmr_raw)
                  << " bmr_reconciled=" << format_double(c.bmr_reconciled)
                  << " success=" << format_double(c.success_rate) << "\n";
        csv << "sensor,sigma," << format_double(sigma) << ',' << format_double(c.bmr_raw) << ','
            << format_double(c.bmr_reconciled) << ',' << format_double(c.success_rate) << ",,,\n";
    }
    StudySpec accel;
    accel.study = StudyKind::eavesdrop_distance_accel;
    accel.trials_per_cell = o.trials;
    accel.base_seed = o.seed;
    for (double noise : parse_grid(o.attacker_grid)) {
        accel.eavesdropper_noise = noise;
        const StudyResult r = run_study(accel);
        const auto& c1 = r.cells[0];
        const auto& c3 = r.cells[2];
        std::cout << "eavesdropper_noise=" << format_double(noise) << " mi(1)=" << format_double(*c1.mi_device)
                  << " mi(3)=" << format_double(*c3.mi_device) << " bmr(3)=" << format_double(*c3.attacker_bmr)
                  << "\n";
        csv << "accelerometer,noise," << format_double(noise) << ",,,," << format_double(*c1.mi_device) << ','
            << format_double(*c3.mi_device) << ',' << format_double(*c3.attacker_bmr) << '\n';
    }
    const std::string path = out_path(o, "calibrate.csv");
    write_text(path, csv.str());
    std::cout << "wrote " << path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tagsim: resonance-based pairing simulator"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--seed", o.seed, "Base seed");
    app.add_option("--out", o.out, "Output directory");
    app.add_option("--config", o.config, "Key/value config file; its values override flags");
    app.add_flag("--check", o.check, "Exit nonzero when an acceptance assertion fails");

    auto scene_opts = [&](CLI::App* c) {
        c->add_option("--posture", o.posture, "palm|fist|border|corner");
        c->add_option("--location", o.location, "Wearing location 1..5");
        c->add_option("--object", o.object, "cubic|phone|mouse|cup");
        c->add_option("--duration", o.duration, "Sweep duration in seconds");
    };

    auto* simulate = app.add_subcommand("simulate", "Synthesize traces, spectra and bits for one scene");
    scene_opts(simulate);

    auto* pair = app.add_subcommand("pair", "Run the pairing protocol for one scene");
    scene_opts(pair);
    pair->add_option("--loss", o.loss, "Frame loss probability");
    pair->add_option("--corrupt", o.corrupt, "Frame bit-flip probability");
    pair->add_option("--latency", o.latency, "One-way latency in seconds");
    pair->add_flag("--tamper-delta", o.tamper_delta, "Flip a bit of every Delta in flight");
    pair->add_flag("--jam-delta", o.jam_delta, "Drop every Delta in flight");

    auto* attack = app.add_subcommand("attack", "Run an eavesdropper over seeded scenes");
    scene_opts(attack);
    attack->add_option("--kind", o.kind, "acoustic|accelerometer");
    attack->add_option("--distance", o.distance, "Distance in inches");
    attack->add_option("--trials", o.trials, "Number of scenes");

    auto* study = app.add_subcommand("study", "Run a study and write its reports");
    study->add_option("--study", o.study, "Study name or all");
    study->add_option("--trials", o.trials, "Trials per cell (>= 30)");
    study->add_option("--format", o.format, "csv|json|both");

    auto* nist_cmd = app.add_subcommand("nist", "Run the randomness battery on a bit file");
    nist_cmd->add_option("--input", o.input, "File of 0/1 characters");
    nist_cmd->add_option("--random-bits", o.random_bits, "Test this many generator bits instead");

    auto* report = app.add_subcommand("report", "Summarise study JSON files in the output directory");

    auto* calibrate = app.add_subcommand("calibrate", "Sweep noise levels against the overview and eavesdropper anchors");
    calibrate->add_option("--trials", o.trials, "Trials per point");
    calibrate->add_option("--sigma-grid", o.sigma_grid, "Comma-separated sensor noise values");
    calibrate->add_option("--motion", o.motion, "Motion artifact RMS held fixed during the sweep");
    calibrate->add_option("--attacker-grid", o.attacker_grid, "Comma-separated accelerometer eavesdropper noise values");

    CLI11_PARSE(app, argc, argv);

    try {
        std::optional<KeyValueConfig> cfg;
        if (!o.config.empty()) {
            cfg = KeyValueConfig::load(o.config);
            apply_config(o, *cfg);
        }
        const KeyValueConfig* c = cfg ? &*cfg : nullptr;
        if (simulate->parsed()) return cmd_simulate(o, c);
        if (pair->parsed()) return cmd_pair(o, c);
        if (attack->parsed()) return cmd_attack(o);
        if (study->parsed()) return cmd_study(o);
        if (nist_cmd->parsed()) return cmd_nist(o);
        if (report->parsed()) return cmd_report(o);
        if (calibrate->parsed()) return cmd_calibrate(o);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
