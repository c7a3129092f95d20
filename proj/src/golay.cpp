#include "tag/golay.hpp"

#include <stdexcept>

#include "tag/errors.hpp"

namespace tag {

namespace {
constexpr std::uint32_t kWordMask = (1u << 23) - 1;
}

const GolayCodec& GolayCodec::instance() {
    static const GolayCodec codec;
    return codec;
}

std::uint32_t GolayCodec::syndrome(std::uint32_t word) const {
    std::uint32_t r = word & kWordMask;
    for (int bit = 22; bit >= 11; --bit)
        if (r & (1u << bit)) r ^= generator << (bit - 11);
    return r;
}

std::uint32_t GolayCodec::encode(std::uint32_t message) const {
    const std::uint32_t shifted = (message & 0xFFFu) << 11;
    return shifted | syndrome(shifted);
}

GolayCodec::GolayCodec() {
    std::array<bool, 2048> filled{};
    auto add = [&](std::uint32_t e) {
        const std::uint32_t s = syndrome(e);
        if (filled[s]) throw std::logic_error("Golay syndrome table collision");
        filled[s] = true;
        error_for_syndrome_[s] = e;
    };
    add(0);
    for (int a = 0; a < 23; ++a) {
        add(1u << a);
        for (int b = a + 1; b < 23; ++b) {
            add((1u << a) | (1u << b));
            for (int c = b + 1; c < 23; ++c) add((1u << a) | (1u << b) | (1u << c));
        }
    }
}

std::uint32_t GolayCodec::correct(std::uint32_t word) const {
    word &= kWordMask;
    return word ^ error_for_syndrome_[syndrome(word)];
}

std::uint32_t GolayCodec::decode(std::uint32_t word) const { return correct(word) >> 11; }

BitSequence golay_encode(const BitSequence& message) {
    if (message.size() != 12) throw ConfigError("golay_encode: message must be 12 bits");
    return from_word(GolayCodec::instance().encode(to_word(message)), 23);
}

BitSequence golay_decode(const BitSequence& word) {
    if (word.size() != 23) throw ConfigError("golay_decode: word must be 23 bits");
    return from_word(GolayCodec::instance().decode(to_word(word)), 12);
}

}  // namespace tag
