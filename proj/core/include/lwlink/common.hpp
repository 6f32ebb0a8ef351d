#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace lwlink {

using Bytes = std::vector<std::uint8_t>;
using Block16 = std::array<std::uint8_t, 16>;
using MacAddr = std::array<std::uint8_t, 6>;
using Seed256 = std::array<std::uint8_t, 32>;

// Cipher suites selectable for the link. Reference is the 256-bit
// permutation geometry with the built-in round function; the named suites
// reuse the same round function at their own state widths.
enum class Scheme { Reference, Spix, Ace, Wage };

const char* scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

std::string to_hex(std::span<const std::uint8_t> data);
Bytes from_hex(const std::string& hex);

// 128-bit big-endian counters (replay counters and friends).
Block16 counter_increment(const Block16& c);
int counter_compare(const Block16& a, const Block16& b);
Block16 counter_from_u64(std::uint64_t v);

}  // namespace lwlink
