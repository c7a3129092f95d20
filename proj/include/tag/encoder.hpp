#pragma once

#include <cstddef>

#include "tag/bits.hpp"
#include "tag/spectral.hpp"

namespace tag {

struct SegmentGrid {
    double band_start = 20.0;
    double band_end = 125.0;
    std::size_t segment_count = 6;
    std::size_t subsegment_count = 3;

    double segment_width() const;
    std::size_t segment_of(double f) const;
    std::size_t subsegment_of(double f) const;  // 0-based within its segment
};

void validate(const SegmentGrid& grid);

// Two bits for subsegment s (0-based): 01, 11, 10.
BitSequence subsegment_code(std::size_t s);

// R_1..R_n then A_1..A_n, two bits each; an empty segment encodes as 00.
BitSequence encode(const ExtremaSet& extrema, const SegmentGrid& grid = {});

std::size_t gray_distance(double f, double f2, const SegmentGrid& grid = {});

// Full legitimate-side chain: spectrum, smoothing, extrema, encoding.
struct PipelineConfig {
    SegmentGrid grid;
    std::size_t smooth_window = 10;
    double extrema_window_hz = 10.0;
};

ExtremaSet extract_extrema(const AccelTrace& trace, const PipelineConfig& cfg = {});
BitSequence extract_bits(const AccelTrace& trace, const PipelineConfig& cfg = {});

}  // namespace tag
