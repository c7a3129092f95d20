#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tag {

// One bit per element, values 0 or 1.
using BitSequence = std::vector<std::uint8_t>;

std::string to_string(const BitSequence& bits);
BitSequence from_string(std::string_view s);

std::size_t hamming(const BitSequence& a, const BitSequence& b);
BitSequence xor_bits(const BitSequence& a, const BitSequence& b);

// Integer <-> bits, first element is the most significant bit.
std::uint32_t to_word(const BitSequence& bits);
BitSequence from_word(std::uint32_t word, std::size_t length);

// MSB-first packing, zero padded in the final byte.
std::vector<std::uint8_t> pack_bytes(const BitSequence& bits);
BitSequence unpack_bytes(const std::uint8_t* data, std::size_t bit_count);

}  // namespace tag
