#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tripplan::util {

struct csv_row {
  std::size_t line_{0U};  // 1-based line number in the source
  std::vector<std::string> fields_;
};

struct csv_table {
  std::vector<std::string> header_;
  std::vector<csv_row> rows_;
};

// Minimal CSV: comma separated, optional double quotes around a field,
// blank lines skipped. Empty input yields an empty header.
csv_table parse_csv(std::string_view);

std::string_view trim(std::string_view);

std::optional<double> parse_double(std::string_view);
std::optional<std::int64_t> parse_int(std::string_view);

}  // namespace tripplan::util
