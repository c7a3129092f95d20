#include <cmath>
#include <numbers>

#include "doctest.h"
#include "tag/adversary.hpp"
#include "tag/errors.hpp"
#include "tag/metrics.hpp"
#include "tag/rng.hpp"
#include "tag/scene.hpp"

using namespace tag;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double pooled_mi(const std::vector<BitSequence>& a, const std::vector<BitSequence>& b) {
    return mutual_information(pooled_bits(a), pooled_bits(b));
}

}  // namespace

TEST_CASE("coupling curve") {
    const auto c = default_coupling();
    CHECK(c(1.0) == doctest::Approx(0.8));
    double prev = c(0.5);
    for (double d = 1.0; d <= 36.0; d += 0.5) {
        CHECK(c(d) <= prev);
        prev = c(d);
    }
    CHECK(c(11.0) < 1e-6);
}

TEST_CASE("configuration validation and parsing") {
    auto cfg = default_eavesdropper(EavesdropperKind::acoustic, 6.0);
    CHECK(cfg.kind == EavesdropperKind::acoustic);
    CHECK(cfg.ambient_noise_level > 0.0);
    cfg.distance = 0.0;
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    cfg = default_eavesdropper(EavesdropperKind::accelerometer, 3.0);
    cfg.coupling.at_one_inch = 1.5;
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    CHECK(parse_eavesdropper_kind("acoustic") == EavesdropperKind::acoustic);
    CHECK(std::string(to_string(EavesdropperKind::accelerometer)) == "accelerometer");
    CHECK_THROWS_AS(parse_eavesdropper_kind("camera"), ConfigError);
}

TEST_CASE("observations are deterministic and labelled") {
    const auto scene = random_scene(21);
    const auto cfg = default_eavesdropper(EavesdropperKind::accelerometer, 2.0);
    const auto a = observe(scene, cfg);
    const auto b = observe(scene, cfg);
    CHECK(a.samples == b.samples);
    CHECK(a.observer == Observer::eavesdropper);
    CHECK(a.samples.size() == synthesize_trace(scene, Observer::device).samples.size());
}

TEST_CASE("full compromise reproduces the device bits") {
    const auto scene = random_scene(22);
    const auto t = synthesize_trace(scene, Observer::device);
    CHECK(attack_pipeline(t) == extract_bits(t));
}

TEST_CASE("pure noise carries no information about device bits") {
    std::vector<BitSequence> dev, att;
    Rng rng(77);
    for (std::uint64_t seed = 1; seed <= 500; ++seed) {
        const auto scene = random_scene(seed);
        const auto t = synthesize_trace(scene, Observer::device);
        AccelTrace noise = t;
        for (auto& v : noise.samples) v = rng.normal();
        dev.push_back(extract_bits(t));
        att.push_back(attack_pipeline(noise));
    }
    CHECK(pooled_mi(dev, att) < 0.01);
}

TEST_CASE("acoustic extrema land on natural frequencies at the chance rate") {
    double hits = 0.0, total = 0.0, chance = 0.0;
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        const auto scene = random_scene(seed);
        const auto obs = observe(scene, default_eavesdropper(EavesdropperKind::acoustic, 6.0));
        const auto e = extract_extrema(obs);
        const double bin = obs.sample_rate / static_cast<double>(obs.samples.size());
        const auto w = natural_frequencies(scene.system);
        const auto near = [&](double f) {
            for (double wn : w)
                if (std::abs(f - wn / kTwoPi) <= bin) return true;
            return false;
        };
        for (const auto& x : e.resonances) {
            hits += near(x.frequency);
            total += 1.0;
        }
        // Probability that a uniformly placed frequency falls within one bin of a natural frequency.
        const std::size_t grid = 2000;
        std::size_t covered = 0;
        for (std::size_t i = 0; i < grid; ++i) covered += near(20.0 + 105.0 * (static_cast<double>(i) + 0.5) / grid);
        chance += static_cast<double>(covered) / grid * static_cast<double>(e.resonances.size());
    }
    REQUIRE(total > 0.0);
    const double observed = hits / total, expected = chance / total;
    INFO("observed " << observed << " expected " << expected);
    CHECK(observed <= 2.0 * expected);
    CHECK(observed >= 0.5 * expected);
}

TEST_CASE("accelerometer information falls with distance") {
    std::vector<BitSequence> wear;
    std::vector<std::vector<BitSequence>> att(3);
    const double distances[] = {1.0, 2.0, 3.0};
    for (std::uint64_t seed = 1; seed <= 300; ++seed) {
        const auto scene = random_scene(seed);
        wear.push_back(extract_bits(synthesize_trace(scene, Observer::wearable)));
        for (std::size_t i = 0; i < 3; ++i)
            att[i].push_back(attack_pipeline(observe(scene, default_eavesdropper(EavesdropperKind::accelerometer, distances[i]))));
    }
    const double mi1 = pooled_mi(wear, att[0]), mi2 = pooled_mi(wear, att[1]), mi3 = pooled_mi(wear, att[2]);
    INFO(mi1 << " " << mi2 << " " << mi3);
    CHECK(mi1 > mi2);
    CHECK(mi2 > mi3);
    CHECK(mi1 > 0.2);
}

namespace {

struct SpectrumCorrelations {
    double legit_min = 1.0;
    double acoustic_mean = 0.0;
};

SpectrumCorrelations spectrum_correlations() {
    SpectrumCorrelations out;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const auto scene = random_scene(seed);
        const auto w = smooth(spectrum(synthesize_trace(scene, Observer::wearable))).magnitudes;
        const auto d = smooth(spectrum(synthesize_trace(scene, Observer::device))).magnitudes;
        const auto a = smooth(spectrum(observe(scene, default_eavesdropper(EavesdropperKind::acoustic, 6.0)))).magnitudes;
        out.legit_min = std::min(out.legit_min, pearson_correlation(w, d));
        out.acoustic_mean += pearson_correlation(a, d) / 50.0;
    }
    return out;
}

}  // namespace

TEST_CASE("wearable and device spectra correlate") {
    CHECK(spectrum_correlations().legit_min >= 0.95);
}

// The acoustic observation is the motor excitation, whose sweep envelope rises with frequency
// like the contact response does, so this correlation is expected to be high.
TEST_CASE("acoustic spectra are uncorrelated with the device spectrum") {
    const double r = spectrum_correlations().acoustic_mean;
    INFO("mean acoustic correlation " << r);
    CHECK(std::abs(r) <= 0.1);
}
