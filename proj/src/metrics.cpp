#include "tag/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "tag/errors.hpp"

namespace tag {

double bit_mismatch_rate(const BitSequence& a, const BitSequence& b) {
    if (a.size() != b.size()) throw ConfigError("bit mismatch rate needs equal lengths");
    if (a.empty()) throw ConfigError("bit mismatch rate of empty sequences");
    return static_cast<double>(hamming(a, b)) / static_cast<double>(a.size());
}

double entropy(const std::vector<std::uint32_t>& symbols) {
    if (symbols.empty()) throw ConfigError("entropy of an empty collection");
    std::map<std::uint32_t, std::size_t> counts;
    for (auto s : symbols) ++counts[s];
    const double n = static_cast<double>(symbols.size());
    double h = 0.0;
    for (const auto& [sym, c] : counts) {
        const double p = static_cast<double>(c) / n;
        h -= p * std::log2(p);
    }
    return h;
}

double entropy_per_code(const std::vector<TrialReport>& reports, std::size_t code_index) {
    if (code_index < 1 || code_index > 12) throw ConfigError("code index must be in 1..12");
    std::vector<std::uint32_t> codes;
    codes.reserve(reports.size());
    const std::size_t at = 2 * (code_index - 1);
    for (const auto& r : reports) {
        if (r.wearable_bits.size() < at + 2) throw ConfigError("report has fewer bits than the code index needs");
        codes.push_back(static_cast<std::uint32_t>(r.wearable_bits[at] << 1 | r.wearable_bits[at + 1]));
    }
    return entropy(codes);
}

double entropy_per_key_bit(const std::vector<TrialReport>& reports, std::size_t key_bit) {
    std::vector<std::uint32_t> bits;
    for (const auto& r : reports) {
        if (r.wearable_key.size() > key_bit) bits.push_back(r.wearable_key[key_bit]);
    }
    return entropy(bits);
}

double mutual_information(const std::vector<std::uint32_t>& xs, const std::vector<std::uint32_t>& ys) {
    if (xs.size() != ys.size()) throw ConfigError("mutual information needs equal lengths");
    if (xs.size() < 100) throw ConfigError("mutual information needs at least 100 symbols");
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> joint;
    std::map<std::uint32_t, std::size_t> px;
    std::map<std::uint32_t, std::size_t> py;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        ++joint[{xs[i], ys[i]}];
        ++px[xs[i]];
        ++py[ys[i]];
    }
    const double n = static_cast<double>(xs.size());
    double mi = 0.0;
    for (const auto& [xy, c] : joint) {
        const double pxy = static_cast<double>(c) / n;
        const double pa = static_cast<double>(px[xy.first]) / n;
        const double pb = static_cast<double>(py[xy.second]) / n;
        mi += pxy * std::log2(pxy / (pa * pb));
    }
    return std::max(mi, 0.0);
}

std::vector<std::uint32_t> pooled_bits(const std::vector<BitSequence>& sequences) {
    std::vector<std::uint32_t> out;
    for (const auto& s : sequences) out.insert(out.end(), s.begin(), s.end());
    return out;
}

double bit_rate(std::size_t secret_bits, double duration) {
    if (!(duration > 0.0)) throw ConfigError("bit rate needs a positive duration");
    return static_cast<double>(secret_bits) / duration;
}

BitRates bit_rate(const std::vector<TrialReport>& reports) {
    double raw_sum = 0.0;
    double rec_sum = 0.0;
    std::size_t raw_n = 0;
    std::size_t rec_n = 0;
    for (const auto& r : reports) {
        if (r.wearable_bits == r.device_bits && !r.wearable_bits.empty()) {
            raw_sum += bit_rate(r.wearable_bits.size(), r.duration);
            ++raw_n;
        }
        if (r.keys_matched && !r.wearable_key.empty()) {
            rec_sum += bit_rate(r.wearable_key.size(), r.duration);
            ++rec_n;
        }
    }
    BitRates out;
    if (raw_n) out.raw = raw_sum / static_cast<double>(raw_n);
    if (rec_n) out.reconciled = rec_sum / static_cast<double>(rec_n);
    return out;
}

double pearson_correlation(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw ConfigError("correlation needs two equal-length series");
    const double n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace tag
