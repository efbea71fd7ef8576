#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tripplan {

enum class error_code {
  kMalformedRecord,
  kDanglingReference,
  kScheduleInconsistent,
  kNonpositiveRadius,
  kUnknownNode,
  kSyntaxError,
  kUnknownVariable,
  kUnknownMode,
  kUnsupportedProgression,
  kNonpositiveAnswer,
  kNegativeQuantity,
  kUnknownEndpoint,
  kUnknownDataset,
  kInvalidRequest
};

std::string_view to_str(error_code);

struct error : public std::runtime_error {
  error(error_code code, std::string const& msg,
        std::optional<std::size_t> position = std::nullopt)
      : std::runtime_error{msg}, code_{code}, position_{position} {}

  error_code code() const noexcept { return code_; }

  // Character offset into the source text (syntax errors only).
  std::optional<std::size_t> position() const noexcept { return position_; }

private:
  error_code code_;
  std::optional<std::size_t> position_;
};

}  // namespace tripplan
