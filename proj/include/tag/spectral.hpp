#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tag/vibration.hpp"

namespace tag {

struct FrequencySpectrum {
    double band_start = 20.0;
    double band_end = 125.0;
    double bin_width = 0.0;
    std::size_t first_bin = 0;  // DFT index of magnitudes[0]
    std::vector<double> magnitudes;

    double frequency(std::size_t i) const { return static_cast<double>(first_bin + i) * bin_width; }
};

struct Extremum {
    double frequency;
    double amplitude;
    bool operator==(const Extremum&) const = default;
};

struct ExtremaSet {
    std::vector<Extremum> resonances;
    std::vector<Extremum> antiresonances;
    bool operator==(const ExtremaSet&) const = default;
};

// Single-sided amplitude spectrum 2|X_k|/N over the bins inside the band.
FrequencySpectrum spectrum(const AccelTrace& trace, double band_start = 20.0, double band_end = 125.0);

// Centred moving average; the window shrinks at the edges.
FrequencySpectrum smooth(const FrequencySpectrum& spec, std::size_t window = 10);

ExtremaSet detect_extrema(const FrequencySpectrum& spec, double window_hz = 10.0);

// Magnitudes of the full DFT of a real sequence, bins 0..n/2.
std::vector<double> dft_magnitudes(const std::vector<double>& x);

void write_spectrum_csv(const FrequencySpectrum& spec, const std::string& path);

}  // namespace tag
