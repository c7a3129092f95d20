#pragma once

#include <array>
#include <cstdint>

namespace tag {

std::uint64_t splitmix64(std::uint64_t& state);

// Mixes a stream label into a seed; stable across platforms.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// xoshiro256** with explicit uniform/normal draws so sequences are
// identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next();
    double uniform();                       // [0, 1)
    double uniform(double lo, double hi);   // [lo, hi)
    std::uint64_t below(std::uint64_t n);   // [0, n)
    double normal();                        // N(0, 1)
    bool bernoulli(double p);

private:
    std::array<std::uint64_t, 4> s_{};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace tag
