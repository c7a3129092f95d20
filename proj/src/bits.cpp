#include "tag/bits.hpp"

#include <stdexcept>

namespace tag {

std::string to_string(const BitSequence& bits) {
    std::string s;
    s.reserve(bits.size());
    for (auto b : bits) s.push_back(b ? '1' : '0');
    return s;
}

BitSequence from_string(std::string_view s) {
    BitSequence bits;
    bits.reserve(s.size());
    for (char c : s) {
        if (c != '0' && c != '1') throw std::invalid_argument("bit string contains non-binary character");
        bits.push_back(c == '1');
    }
    return bits;
}

std::size_t hamming(const BitSequence& a, const BitSequence& b) {
    if (a.size() != b.size()) throw std::invalid_argument("hamming: length mismatch");
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] != b[i]);
    return d;
}

BitSequence xor_bits(const BitSequence& a, const BitSequence& b) {
    if (a.size() != b.size()) throw std::invalid_argument("xor_bits: length mismatch");
    BitSequence out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] ^ b[i];
    return out;
}

std::uint32_t to_word(const BitSequence& bits) {
    if (bits.size() > 32) throw std::invalid_argument("to_word: more than 32 bits");
    std::uint32_t w = 0;
    for (auto b : bits) w = (w << 1) | (b & 1u);
    return w;
}

BitSequence from_word(std::uint32_t word, std::size_t length) {
    if (length > 32) throw std::invalid_argument("from_word: more than 32 bits");
    BitSequence bits(length);
    for (std::size_t i = 0; i < length; ++i) bits[i] = (word >> (length - 1 - i)) & 1u;
    return bits;
}

std::vector<std::uint8_t> pack_bytes(const BitSequence& bits) {
    std::vector<std::uint8_t> out((bits.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) out[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
    return out;
}

BitSequence unpack_bytes(const std::uint8_t* data, std::size_t bit_count) {
    BitSequence bits(bit_count);
    for (std::size_t i = 0; i < bit_count; ++i) bits[i] = (data[i / 8] >> (7 - i % 8)) & 1u;
    return bits;
}

}  // namespace tag
