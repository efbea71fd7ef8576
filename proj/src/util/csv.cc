#include "tripplan/util/csv.h"

#include <charconv>
#include <cmath>
#include <cstdint>

namespace tripplan::util {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r' || s.front() == '\n')) {
    s.remove_prefix(1U);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r' || s.back() == '\n')) {
    s.remove_suffix(1U);
  }
  return s;
}

namespace {

std::vector<std::string> split_fields(std::string_view line) {
  auto fields = std::vector<std::string>{};
  auto cur = std::string{};
  auto quoted = false;
  for (auto const c : line) {
    if (c == '"') {
      quoted = !quoted;
    } else if (c == ',' && !quoted) {
      fields.emplace_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.emplace_back(trim(cur));
  return fields;
}

}  // namespace

csv_table parse_csv(std::string_view const text) {
  auto table = csv_table{};
  auto line_no = std::size_t{0U};
  auto has_header = false;
  auto pos = std::size_t{0U};
  while (pos <= text.size()) {
    auto const end = text.find('\n', pos);
    auto const line = text.substr(
        pos, end == std::string_view::npos ? std::string_view::npos
                                           : end - pos);
    ++line_no;
    if (!trim(line).empty()) {
      if (!has_header) {
        table.header_ = split_fields(trim(line));
        has_header = true;
      } else {
        table.rows_.push_back({line_no, split_fields(trim(line))});
      }
    }
    if (end == std::string_view::npos) {
      break;
    }
    pos = end + 1U;
  }
  return table;
}

std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (s.empty()) {
    return std::nullopt;
  }
  if (s.front() == '+') {
    s.remove_prefix(1U);
  }
  auto v = 0.0;
  auto const [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

std::optional<std::int64_t> parse_int(std::string_view s) {
  s = trim(s);
  if (s.empty()) {
    return std::nullopt;
  }
  if (s.front() == '+') {
    s.remove_prefix(1U);
  }
  auto v = std::int64_t{0};
  auto const [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    return std::nullopt;
  }
  return v;
}

}  // namespace tripplan::util
