#pragma once

#include <array>
#include <cstdint>

#include "tag/bits.hpp"

namespace tag {

// Binary (23,12) Golay code, systematic: message in the top 12 bits, parity in the low 11.
class GolayCodec {
public:
    static constexpr int n = 23;
    static constexpr int k = 12;
    static constexpr int t = 3;
    static constexpr std::uint32_t generator = 0xC75;  // x^11+x^10+x^6+x^5+x^4+x^2+1

    static const GolayCodec& instance();

    std::uint32_t encode(std::uint32_t message) const;
    std::uint32_t decode(std::uint32_t word) const;       // nearest codeword's message
    std::uint32_t correct(std::uint32_t word) const;      // nearest codeword
    std::uint32_t syndrome(std::uint32_t word) const;
    bool is_codeword(std::uint32_t word) const { return syndrome(word) == 0; }

private:
    GolayCodec();
    std::array<std::uint32_t, 2048> error_for_syndrome_{};
};

BitSequence golay_encode(const BitSequence& message);
BitSequence golay_decode(const BitSequence& word);

}  // namespace tag
