#include "tag/nist.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "tag/errors.hpp"
#include "tag/spectral.hpp"

namespace tag::nist {

namespace {

double igamc(double a, double x) {
    if (x <= 0.0) return 1.0;
    return boost::math::gamma_q(a, x);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

void require(const BitSequence& bits, std::size_t n, const char* test) {
    if (bits.size() < n) {
        throw ConfigError(std::string(test) + " needs at least " + std::to_string(n) + " bits, got " +
                          std::to_string(bits.size()));
    }
}

double psi_squared(const BitSequence& bits, std::size_t m) {
    if (m == 0) return 0.0;
    const std::size_t n = bits.size();
    std::vector<std::size_t> counts(std::size_t{1} << m, 0);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t v = 0;
        for (std::size_t j = 0; j < m; ++j) v = (v << 1) | bits[(i + j) % n];
        ++counts[v];
    }
    double sum = 0.0;
    for (auto c : counts) sum += static_cast<double>(c) * static_cast<double>(c);
    return sum * static_cast<double>(counts.size()) / static_cast<double>(n) - static_cast<double>(n);
}

double phi(const BitSequence& bits, std::size_t m) {
    if (m == 0) return 0.0;
    const std::size_t n = bits.size();
    std::vector<std::size_t> counts(std::size_t{1} << m, 0);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t v = 0;
        for (std::size_t j = 0; j < m; ++j) v = (v << 1) | bits[(i + j) % n];
        ++counts[v];
    }
    double sum = 0.0;
    for (auto c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / static_cast<double>(n);
        sum += p * std::log(p);
    }
    return sum;
}

}  // namespace

double frequency(const BitSequence& bits) {
    require(bits, 1, "Frequency");
    long s = 0;
    for (auto b : bits) s += b ? 1 : -1;
    const double s_obs = std::abs(static_cast<double>(s)) / std::sqrt(static_cast<double>(bits.size()));
    return std::erfc(s_obs / std::sqrt(2.0));
}

double block_frequency(const BitSequence& bits, std::size_t block_length) {
    if (block_length == 0) throw ConfigError("Block Frequency block length must be positive");
    require(bits, block_length, "Block Frequency");
    const std::size_t blocks = bits.size() / block_length;
    double chi = 0.0;
    for (std::size_t i = 0; i < blocks; ++i) {
        std::size_t ones = 0;
        for (std::size_t j = 0; j < block_length; ++j) ones += bits[i * block_length + j];
        const double pi = static_cast<double>(ones) / static_cast<double>(block_length) - 0.5;
        chi += pi * pi;
    }
    chi *= 4.0 * static_cast<double>(block_length);
    return igamc(static_cast<double>(blocks) / 2.0, chi / 2.0);
}

double cumulative_sums(const BitSequence& bits, bool forward) {
    require(bits, 1, "Cumulative Sums");
    const long n = static_cast<long>(bits.size());
    long s = 0;
    long z = 0;
    for (long i = 0; i < n; ++i) {
        const auto b = bits[static_cast<std::size_t>(forward ? i : n - 1 - i)];
        s += b ? 1 : -1;
        z = std::max(z, std::abs(s));
    }
    const double sq = std::sqrt(static_cast<double>(n));
    const double zd = static_cast<double>(z);
    double sum1 = 0.0;
    for (long k = (-n / z + 1) / 4; k <= (n / z - 1) / 4; ++k) {
        sum1 += normal_cdf((4.0 * k + 1.0) * zd / sq) - normal_cdf((4.0 * k - 1.0) * zd / sq);
    }
    double sum2 = 0.0;
    for (long k = (-n / z - 3) / 4; k <= (n / z - 1) / 4; ++k) {
        sum2 += normal_cdf((4.0 * k + 3.0) * zd / sq) - normal_cdf((4.0 * k + 1.0) * zd / sq);
    }
    return std::clamp(1.0 - sum1 + sum2, 0.0, 1.0);
}

double runs(const BitSequence& bits) {
    require(bits, 2, "Runs");
    const double n = static_cast<double>(bits.size());
    std::size_t ones = 0;
    for (auto b : bits) ones += b;
    const double pi = static_cast<double>(ones) / n;
    if (std::abs(pi - 0.5) >= 2.0 / std::sqrt(n)) return 0.0;
    std::size_t v = 1;
    for (std::size_t i = 1; i < bits.size(); ++i) v += bits[i] != bits[i - 1];
    const double num = std::abs(static_cast<double>(v) - 2.0 * n * pi * (1.0 - pi));
    return std::erfc(num / (2.0 * std::sqrt(2.0 * n) * pi * (1.0 - pi)));
}

double longest_run(const BitSequence& bits) {
    require(bits, 128, "Longest Run");
    const std::size_t n = bits.size();
    std::size_t m = 0;
    std::vector<double> pi;
    std::size_t lo = 0;
    if (n < 6272) {
        m = 8;
        lo = 1;
        pi = {0.21484375, 0.3671875, 0.23046875, 0.1875};
    } else if (n < 750000) {
        m = 128;
        lo = 4;
        pi = {0.1174035788, 0.242955959, 0.249363483, 0.17517706, 0.102701071, 0.112398847};
    } else {
        m = 10000;
        lo = 10;
        pi = {0.0882, 0.2092, 0.2483, 0.1933, 0.1208, 0.0675, 0.0727};
    }
    const std::size_t k = pi.size() - 1;
    const std::size_t blocks = n / m;
    std::vector<double> v(pi.size(), 0.0);
    for (std::size_t i = 0; i < blocks; ++i) {
        std::size_t run = 0;
        std::size_t longest = 0;
        for (std::size_t j = 0; j < m; ++j) {
            run = bits[i * m + j] ? run + 1 : 0;
            longest = std::max(longest, run);
        }
        const std::size_t cls = std::clamp(longest, lo, lo + k) - lo;
        v[cls] += 1.0;
    }
    const double nb = static_cast<double>(blocks);
    double chi = 0.0;
    for (std::size_t i = 0; i < pi.size(); ++i) chi += (v[i] - nb * pi[i]) * (v[i] - nb * pi[i]) / (nb * pi[i]);
    return igamc(static_cast<double>(k) / 2.0, chi / 2.0);
}

double spectral(const BitSequence& bits) {
    require(bits, 2, "FFT");
    const std::size_t n = bits.size();
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = bits[i] ? 1.0 : -1.0;
    const std::vector<double> mag = dft_magnitudes(x);
    const double nd = static_cast<double>(n);
    const double t = std::sqrt(std::log(1.0 / 0.05) * nd);
    const double n0 = 0.95 * nd / 2.0;
    double n1 = 0.0;
    for (std::size_t j = 0; j < n / 2; ++j) n1 += mag[j] < t ? 1.0 : 0.0;
    const double d = (n1 - n0) / std::sqrt(nd * 0.95 * 0.05 / 4.0);
    return std::erfc(std::abs(d) / std::sqrt(2.0));
}

double approximate_entropy(const BitSequence& bits, std::size_t m) {
    require(bits, m + 1, "Approximate Entropy");
    const double n = static_cast<double>(bits.size());
    const double ap_en = phi(bits, m) - phi(bits, m + 1);
    const double chi = 2.0 * n * (std::log(2.0) - ap_en);
    return igamc(std::pow(2.0, static_cast<double>(m) - 1.0), chi / 2.0);
}

std::pair<double, double> serial(const BitSequence& bits, std::size_t m) {
    if (m < 2) throw ConfigError("Serial needs m >= 2");
    require(bits, m, "Serial");
    const double p0 = psi_squared(bits, m);
    const double p1 = psi_squared(bits, m - 1);
    const double p2 = psi_squared(bits, m - 2);
    const double d1 = p0 - p1;
    const double d2 = p0 - 2.0 * p1 + p2;
    const double md = static_cast<double>(m);
    return {igamc(std::pow(2.0, md - 2.0), d1 / 2.0), igamc(std::pow(2.0, md - 3.0), d2 / 2.0)};
}

std::vector<std::pair<std::string, std::size_t>> minimum_lengths(const BatteryConfig& cfg) {
    const auto apen_min = std::size_t{1} << (cfg.approximate_entropy_m + 6);
    const auto serial_min = std::size_t{1} << (cfg.serial_m + 3);
    return {
        {"Frequency", 100},
        {"Block Frequency", std::max<std::size_t>(100, cfg.block_length)},
        {"Cumulative Sums", 100},
        {"Runs", 100},
        {"Longest Run", 128},
        {"FFT", 1000},
        {"Approximate Entropy", apen_min},
        {"Serial", serial_min},
    };
}

std::vector<RandomnessVerdict> battery(const BitSequence& bits, const BatteryConfig& cfg) {
    for (const auto& [test, n] : minimum_lengths(cfg)) require(bits, n, test.c_str());
    const auto [s1, s2] = serial(bits, cfg.serial_m);
    const std::array<std::pair<const char*, double>, 10> results{{
        {"Frequency", frequency(bits)},
        {"Block Frequency", block_frequency(bits, cfg.block_length)},
        {"Cumulative Sums (forward)", cumulative_sums(bits, true)},
        {"Cumulative Sums (backward)", cumulative_sums(bits, false)},
        {"Runs", runs(bits)},
        {"Longest Run", longest_run(bits)},
        {"FFT", spectral(bits)},
        {"Approximate Entropy", approximate_entropy(bits, cfg.approximate_entropy_m)},
        {"Serial (1)", s1},
        {"Serial (2)", s2},
    }};
    std::vector<RandomnessVerdict> out;
    for (const auto& [name, p] : results) out.push_back({name, p, p >= kSignificance});
    return out;
}

}  // namespace tag::nist
