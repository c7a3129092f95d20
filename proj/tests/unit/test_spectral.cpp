#include <algorithm>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "doctest.h"
#include "tag/encoder.hpp"
#include "tag/errors.hpp"
#include "tag/rng.hpp"
#include "tag/scene.hpp"
#include "tag/spectral.hpp"

using namespace tag;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

AccelTrace tones(double seconds, std::initializer_list<std::pair<double, double>> parts, double fs = 250.0) {
    AccelTrace t;
    t.sample_rate = fs;
    const auto n = static_cast<std::size_t>(std::llround(seconds * fs));
    t.samples.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& [f, a] : parts) t.samples[i] += a * std::sin(kTwoPi * f * static_cast<double>(i) / fs);
    return t;
}

FrequencySpectrum flat_spectrum(std::size_t bins, double bin_width, double value) {
    FrequencySpectrum s;
    s.bin_width = bin_width;
    s.first_bin = 40;
    s.band_start = 40 * bin_width;
    s.band_end = s.band_start + static_cast<double>(bins) * bin_width;
    s.magnitudes.assign(bins, value);
    return s;
}

}  // namespace

TEST_CASE("transform agrees with a naive DFT") {
    Rng rng(2);
    std::vector<double> x(437);
    for (auto& v : x) v = rng.normal();
    const auto mag = dft_magnitudes(x);
    REQUIRE(mag.size() == x.size() / 2 + 1);
    for (std::size_t k = 0; k < mag.size(); k += 13) {
        std::complex<double> s{0.0, 0.0};
        for (std::size_t i = 0; i < x.size(); ++i)
            s += x[i] * std::polar(1.0, -kTwoPi * static_cast<double>(k * i) / static_cast<double>(x.size()));
        CHECK(mag[k] == doctest::Approx(std::abs(s)).epsilon(1e-10));
    }
}

TEST_CASE("pure 50 Hz tone has one dominant bin") {
    const auto s = spectrum(tones(1.75, {{50.0, 1.0}}));
    CHECK(s.bin_width == doctest::Approx(250.0 / 438.0));
    const auto it = std::max_element(s.magnitudes.begin(), s.magnitudes.end());
    const double f = s.frequency(static_cast<std::size_t>(it - s.magnitudes.begin()));
    CHECK(std::abs(f - 50.0) <= s.bin_width);
    for (std::size_t i = 0; i < s.magnitudes.size(); ++i) {
        CHECK(s.frequency(i) >= 20.0 - 1e-9);
        CHECK(s.frequency(i) <= 125.0 + 1e-9);
    }
}

TEST_CASE("DC is excluded from the band") {
    AccelTrace t;
    t.samples.assign(438, 3.0);
    const auto s = spectrum(t);
    for (double m : s.magnitudes) CHECK(m < 1e-12);
}

TEST_CASE("two-tone amplitude ratio") {
    const auto s = spectrum(tones(2.0, {{30.0, 1.0}, {80.0, 2.0}}));
    const auto at = [&](double f) { return s.magnitudes[static_cast<std::size_t>(std::llround(f / s.bin_width)) - s.first_bin]; };
    CHECK(at(30.0) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(at(80.0) / at(30.0) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("band errors name the bound") {
    const auto t = tones(1.0, {{50.0, 1.0}});
    try {
        spectrum(t, 20.0, 130.0);
        FAIL("expected an error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("125") != std::string::npos);
    }
    CHECK_THROWS_AS(spectrum(t, 60.0, 50.0), ConfigError);
    AccelTrace one;
    one.samples = {1.0};
    CHECK_THROWS_AS(spectrum(one), ConfigError);
}

TEST_CASE("smoothing examples") {
    auto s = flat_spectrum(50, 0.5, 0.0);
    for (std::size_t i = 0; i < 50; ++i) s.magnitudes[i] = std::sin(static_cast<double>(i));
    CHECK(smooth(s, 1).magnitudes == s.magnitudes);
    const auto c = smooth(flat_spectrum(50, 0.5, 4.2), 10);
    for (double m : c.magnitudes) CHECK(m == doctest::Approx(4.2));
    auto imp = flat_spectrum(50, 0.5, 0.0);
    imp.magnitudes[25] = 3.0;
    const auto p = smooth(imp, 10);
    CHECK(std::count_if(p.magnitudes.begin(), p.magnitudes.end(), [](double m) { return m == doctest::Approx(0.3); }) == 10);
    CHECK(std::count_if(p.magnitudes.begin(), p.magnitudes.end(), [](double m) { return m == 0.0; }) == 40);
    CHECK(p.bin_width == imp.bin_width);
    CHECK_THROWS_AS(smooth(imp, 0), ConfigError);
}

TEST_CASE("edge truncation averages over fewer bins") {
    auto s = flat_spectrum(20, 0.5, 0.0);
    for (std::size_t i = 0; i < 20; ++i) s.magnitudes[i] = static_cast<double>(i);
    const auto out = smooth(s, 10);
    CHECK(out.magnitudes[0] == doctest::Approx((0.0 + 1 + 2 + 3 + 4 + 5) / 6.0));
}

TEST_CASE("monotone spectrum has no extrema") {
    auto s = flat_spectrum(200, 0.5, 0.0);
    for (std::size_t i = 0; i < 200; ++i) s.magnitudes[i] = 1.0 + 0.01 * static_cast<double>(i);
    const auto e = detect_extrema(s);
    CHECK(e.resonances.empty());
    CHECK(e.antiresonances.empty());
}

TEST_CASE("stronger of two close peaks wins") {
    auto s = flat_spectrum(200, 0.5, 1.0);
    const auto bin = [&](double f) { return static_cast<std::size_t>(std::llround(f / 0.5)) - s.first_bin; };
    s.magnitudes[bin(50.0)] = 5.0;
    s.magnitudes[bin(54.0)] = 7.0;
    const auto e = detect_extrema(s);
    REQUIRE(e.resonances.size() == 1);
    CHECK(e.resonances[0].frequency == doctest::Approx(54.0));
    CHECK(e.resonances[0].amplitude == 7.0);
}

TEST_CASE("exact ties go to the lower frequency") {
    auto s = flat_spectrum(200, 0.5, 1.0);
    const auto bin = [&](double f) { return static_cast<std::size_t>(std::llround(f / 0.5)) - s.first_bin; };
    s.magnitudes[bin(60.0)] = 0.2;
    s.magnitudes[bin(65.0)] = 0.2;
    const auto e = detect_extrema(s);
    REQUIRE(e.antiresonances.size() == 1);
    CHECK(e.antiresonances[0].frequency == doctest::Approx(60.0));
}

TEST_CASE("extrema on random scenes satisfy the set invariants") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const auto scene = random_scene(seed);
        const auto sm = smooth(spectrum(synthesize_trace(scene, Observer::device)));
        const auto e = detect_extrema(sm);
        for (const auto* list : {&e.resonances, &e.antiresonances}) {
            for (std::size_t i = 0; i < list->size(); ++i) {
                const auto& x = (*list)[i];
                CHECK(x.frequency >= 20.0);
                CHECK(x.frequency <= 125.0);
                if (i > 0) CHECK(x.frequency - (*list)[i - 1].frequency >= 10.0);
                const auto k = static_cast<std::size_t>(std::llround(x.frequency / sm.bin_width)) - sm.first_bin;
                REQUIRE(k > 0);
                REQUIRE(k + 1 < sm.magnitudes.size());
                if (list == &e.resonances) {
                    CHECK(sm.magnitudes[k] > sm.magnitudes[k - 1]);
                } else {
                    CHECK(sm.magnitudes[k] < sm.magnitudes[k - 1]);
                }
            }
        }
    }
}

TEST_CASE("amplitude scaling leaves extrema frequencies unchanged") {
    const auto scene = random_scene(8);
    auto t = synthesize_trace(scene, Observer::device);
    const auto a = extract_extrema(t);
    for (auto& v : t.samples) v *= 3.5;
    const auto b = extract_extrema(t);
    REQUIRE(a.resonances.size() == b.resonances.size());
    REQUIRE(a.antiresonances.size() == b.antiresonances.size());
    for (std::size_t i = 0; i < a.resonances.size(); ++i) {
        CHECK(a.resonances[i].frequency == b.resonances[i].frequency);
        CHECK(b.resonances[i].amplitude == doctest::Approx(3.5 * a.resonances[i].amplitude));
    }
    for (std::size_t i = 0; i < a.antiresonances.size(); ++i)
        CHECK(a.antiresonances[i].frequency == b.antiresonances[i].frequency);
}

TEST_CASE("dropping up to 100 ms from the head moves extrema by at most one bin") {
    int cases = 0, moved = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto scene = random_scene(seed);
        scene.noise_sigma_device = scene.noise_sigma_wearable = 0.0;
        scene.motion_artifact_amplitude = 0.0;
        const auto full = synthesize_trace(scene, Observer::device);
        const auto ref = extract_extrema(full);
        for (std::size_t drop : {5u, 12u, 25u}) {
            AccelTrace cut = full;
            cut.samples.erase(cut.samples.begin(), cut.samples.begin() + static_cast<long>(drop));
            const auto e = extract_extrema(cut);
            const double bin = 250.0 / static_cast<double>(cut.samples.size());
            ++cases;
            bool ok = e.resonances.size() == ref.resonances.size() && e.antiresonances.size() == ref.antiresonances.size();
            for (std::size_t i = 0; ok && i < e.resonances.size(); ++i)
                ok = std::abs(e.resonances[i].frequency - ref.resonances[i].frequency) <= bin + 1e-9;
            for (std::size_t i = 0; ok && i < e.antiresonances.size(); ++i)
                ok = std::abs(e.antiresonances[i].frequency - ref.antiresonances[i].frequency) <= bin + 1e-9;
            moved += !ok;
        }
    }
    INFO(moved << " of " << cases << " truncated traces moved an extremum by more than one bin");
    CHECK(moved == 0);
}

// The steady-state phase swing through each resonance and rectangular-window leakage put
// ripple on the smoothed spectrum, so this count is expected to exceed dof_count.
TEST_CASE("example system resonance count equals dof count") {
    TrialScene s;
    s.system = example_system(0.03);
    const double c = std::pow(kTwoPi * 40.0 / std::sqrt(1.5), 2);
    for (auto& k : s.system.stiffnesses) k *= c;
    s.contact_dof = 1;
    s.excitation.drive_dof = 1;
    const auto e = extract_extrema(synthesize_trace(s, Observer::device));
    const auto w = natural_frequencies(s.system);
    const double bin = 250.0 / 438.0;
    CHECK(e.resonances.size() == w.size());
    for (double wn : w) {
        const double f = wn / kTwoPi;
        const bool near = std::any_of(e.resonances.begin(), e.resonances.end(),
                                      [&](const Extremum& x) { return std::abs(x.frequency - f) <= bin; });
        CHECK_MESSAGE(near, "no detected resonance within one bin of " << f << " Hz");
    }
}

TEST_CASE("spectrum csv export") {
    const auto path = std::filesystem::temp_directory_path() / "tag_spectrum_test.csv";
    const auto s = spectrum(tones(1.0, {{50.0, 1.0}}));
    write_spectrum_csv(s, path.string());
    std::ifstream f(path);
    std::string header, row;
    std::getline(f, header);
    CHECK(header == "frequency_hz,magnitude");
    std::size_t rows = 0;
    while (std::getline(f, row)) ++rows;
    CHECK(rows == s.magnitudes.size());
    std::filesystem::remove(path);
}
