#include "tag/encoder.hpp"

#include <cmath>
#include <string>

namespace tag {

double SegmentGrid::segment_width() const {
    return (band_end - band_start) / static_cast<double>(segment_count);
}

std::size_t SegmentGrid::segment_of(double f) const {
    if (f < band_start || f > band_end)
        throw ConfigError("frequency " + std::to_string(f) + " Hz lies outside the encoding band");
    const auto s = static_cast<std::size_t>(std::floor((f - band_start) / segment_width()));
    return s >= segment_count ? segment_count - 1 : s;
}

std::size_t SegmentGrid::subsegment_of(double f) const {
    const std::size_t s = segment_of(f);
    const double w = segment_width();
    const double sub_w = w / static_cast<double>(subsegment_count);
    const double offset = (f - band_start) - static_cast<double>(s) * w;
    const auto sub = static_cast<std::size_t>(std::floor(offset / sub_w));
    return sub >= subsegment_count ? subsegment_count - 1 : sub;
}

void validate(const SegmentGrid& grid) {
    if (!(grid.band_end > grid.band_start)) throw ConfigError("grid band is empty");
    if (grid.segment_count < 1) throw ConfigError("grid needs at least one segment");
    if (grid.subsegment_count != 3) throw ConfigError("2-bit location codes require exactly 3 subsegments");
}

BitSequence subsegment_code(std::size_t s) {
    switch (s) {
        case 0: return {0, 1};
        case 1: return {1, 1};
        case 2: return {1, 0};
    }
    throw ConfigError("subsegment index out of range");
}

namespace {

void encode_stream(const std::vector<Extremum>& list, const SegmentGrid& grid, bool prefer_high, BitSequence& out) {
    std::vector<const Extremum*> chosen(grid.segment_count, nullptr);
    for (const auto& e : list) {
        const std::size_t s = grid.segment_of(e.frequency);
        const Extremum* cur = chosen[s];
        if (!cur) {
            chosen[s] = &e;
            continue;
        }
        const bool better = prefer_high ? e.amplitude > cur->amplitude : e.amplitude < cur->amplitude;
        const bool tie_lower = e.amplitude == cur->amplitude && e.frequency < cur->frequency;
        if (better || tie_lower) chosen[s] = &e;
    }
    for (const Extremum* e : chosen) {
        if (!e) {
            out.push_back(0);
            out.push_back(0);
        } else {
            const auto code = subsegment_code(grid.subsegment_of(e->frequency));
            out.insert(out.end(), code.begin(), code.end());
        }
    }
}

}  // namespace

BitSequence encode(const ExtremaSet& extrema, const SegmentGrid& grid) {
    validate(grid);
    BitSequence out;
    out.reserve(4 * grid.segment_count);
    encode_stream(extrema.resonances, grid, true, out);
    encode_stream(extrema.antiresonances, grid, false, out);
    return out;
}

std::size_t gray_distance(double f, double f2, const SegmentGrid& grid) {
    validate(grid);
    if (grid.segment_of(f) != grid.segment_of(f2)) throw ConfigError("gray_distance: frequencies in different segments");
    return hamming(subsegment_code(grid.subsegment_of(f)), subsegment_code(grid.subsegment_of(f2)));
}

ExtremaSet extract_extrema(const AccelTrace& trace, const PipelineConfig& cfg) {
    const auto spec = spectrum(trace, cfg.grid.band_start, cfg.grid.band_end);
    return detect_extrema(smooth(spec, cfg.smooth_window), cfg.extrema_window_hz);
}

BitSequence extract_bits(const AccelTrace& trace, const PipelineConfig& cfg) {
    return encode(extract_extrema(trace, cfg), cfg.grid);
}

}  // namespace tag
