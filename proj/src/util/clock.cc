#include "tripplan/util/clock.h"

#include <charconv>

#include "fmt/core.h"

#include "tripplan/error.h"

namespace tripplan::util {

std::int64_t parse_clock(std::string_view const s) {
  auto const fail = [&]() {
    return error{error_code::kInvalidRequest,
                 fmt::format("invalid clock time \"{}\", expected HH:MM:SS", s)};
  };
  if (s.size() != 8U || s[2] != ':' || s[5] != ':') {
    throw fail();
  }
  auto const field = [&](std::size_t const pos, int const max) {
    auto v = 0;
    auto const [ptr, ec] = std::from_chars(s.data() + pos, s.data() + pos + 2, v);
    if (ec != std::errc{} || ptr != s.data() + pos + 2 || v < 0 || v > max) {
      throw fail();
    }
    return std::int64_t{v};
  };
  return field(0U, 23) * 3600 + field(3U, 59) * 60 + field(6U, 59);
}

std::string format_clock(std::int64_t const seconds) {
  return fmt::format("{:02}:{:02}:{:02}", seconds / 3600, (seconds / 60) % 60,
                     seconds % 60);
}

}  // namespace tripplan::util
