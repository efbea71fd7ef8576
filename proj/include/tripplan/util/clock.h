#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace tripplan::util {

// "HH:MM:SS" -> seconds since midnight, within [0, 86400).
// Throws kInvalidRequest on malformed input.
std::int64_t parse_clock(std::string_view);

// Seconds since midnight -> "HH:MM:SS". Hours may exceed 23.
std::string format_clock(std::int64_t seconds);

}  // namespace tripplan::util
