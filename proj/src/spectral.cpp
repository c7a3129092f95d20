#include "tag/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <mutex>
#include <numeric>

#include <fftw3.h>

namespace tag {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

std::vector<double> dft_magnitudes(const std::vector<double>& x) {
    const int n = static_cast<int>(x.size());
    if (n == 0) return {};
    std::vector<double> in(x);
    std::vector<std::complex<double>> out(static_cast<std::size_t>(n / 2 + 1));
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = fftw_plan_dft_r2c_1d(n, in.data(), reinterpret_cast<fftw_complex*>(out.data()), FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    std::vector<double> mag(out.size());
    for (std::size_t k = 0; k < out.size(); ++k) mag[k] = std::abs(out[k]);
    return mag;
}

FrequencySpectrum spectrum(const AccelTrace& trace, double band_start, double band_end) {
    const std::size_t n = trace.samples.size();
    if (n < 2) throw ConfigError("spectrum: trace needs at least 2 samples");
    if (!(trace.sample_rate > 0.0)) throw ConfigError("spectrum: sample rate must be positive");
    const double nyquist = trace.sample_rate / 2.0;
    if (band_start < 0.0 || band_end <= band_start)
        throw ConfigError("spectrum: band must satisfy 0 <= band_start < band_end");
    if (band_end > nyquist)
        throw ConfigError("spectrum: band_end " + std::to_string(band_end) + " Hz exceeds Nyquist " +
                          std::to_string(nyquist) + " Hz");

    FrequencySpectrum out;
    out.band_start = band_start;
    out.band_end = band_end;
    out.bin_width = trace.sample_rate / static_cast<double>(n);
    out.first_bin = static_cast<std::size_t>(std::ceil(band_start / out.bin_width - 1e-9));
    const auto count = static_cast<std::size_t>(std::llround((band_end - band_start) / out.bin_width));
    const auto mag = dft_magnitudes(trace.samples);
    if (out.first_bin + count > mag.size())
        throw ConfigError("spectrum: band extends past the last DFT bin for this trace length");
    out.magnitudes.resize(count);
    for (std::size_t i = 0; i < count; ++i)
        out.magnitudes[i] = 2.0 * mag[out.first_bin + i] / static_cast<double>(n);
    return out;
}

FrequencySpectrum smooth(const FrequencySpectrum& spec, std::size_t window) {
    if (window < 1) throw ConfigError("smooth: window must be at least 1");
    FrequencySpectrum out = spec;
    const std::size_t n = spec.magnitudes.size();
    const std::size_t lo = (window - 1) / 2;
    const std::size_t hi = window - 1 - lo;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t a = i >= lo ? i - lo : 0;
        const std::size_t b = std::min(n, i + hi + 1);
        double s = 0.0;
        for (std::size_t j = a; j < b; ++j) s += spec.magnitudes[j];
        out.magnitudes[i] = s / static_cast<double>(b - a);
    }
    return out;
}

namespace {

// Greedy suppression: strongest candidate first, exact ties to the lower frequency.
std::vector<Extremum> suppress(std::vector<Extremum> c, double window_hz, bool keep_largest) {
    std::sort(c.begin(), c.end(), [&](const Extremum& x, const Extremum& y) {
        if (x.amplitude != y.amplitude) return keep_largest ? x.amplitude > y.amplitude : x.amplitude < y.amplitude;
        return x.frequency < y.frequency;
    });
    std::vector<Extremum> kept;
    for (const auto& e : c) {
        bool clear = true;
        for (const auto& k : kept)
            if (std::abs(e.frequency - k.frequency) < window_hz) {
                clear = false;
                break;
            }
        if (clear) kept.push_back(e);
    }
    std::sort(kept.begin(), kept.end(), [](const Extremum& x, const Extremum& y) { return x.frequency < y.frequency; });
    return kept;
}

}  // namespace

ExtremaSet detect_extrema(const FrequencySpectrum& spec, double window_hz) {
    const auto& m = spec.magnitudes;
    const std::size_t n = m.size();
    if (static_cast<double>(n) * spec.bin_width < window_hz)
        throw ConfigError("detect_extrema: spectrum narrower than one window");
    std::vector<Extremum> maxima, minima;
    std::size_t start = 0;
    while (start < n) {
        std::size_t end = start;
        while (end + 1 < n && m[end + 1] == m[start]) ++end;
        if (start > 0 && end + 1 < n) {
            const double v = m[start];
            if (v > m[start - 1] && v > m[end + 1]) maxima.push_back({spec.frequency(start), v});
            if (v < m[start - 1] && v < m[end + 1]) minima.push_back({spec.frequency(start), v});
        }
        start = end + 1;
    }
    return {suppress(std::move(maxima), window_hz, true), suppress(std::move(minima), window_hz, false)};
}

void write_spectrum_csv(const FrequencySpectrum& spec, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << "frequency_hz,magnitude\n";
    f.precision(10);
    for (std::size_t i = 0; i < spec.magnitudes.size(); ++i) f << spec.frequency(i) << ',' << spec.magnitudes[i] << '\n';
}

}  // namespace tag
