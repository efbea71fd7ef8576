#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace tripplan::geodata {

enum class mode : std::uint8_t { kWalk, kBike, kCar, kPublic, kTaxi };

constexpr auto const kNumModes = std::size_t{5U};

constexpr auto const kAllModes = std::array<mode, kNumModes>{
    mode::kWalk, mode::kBike, mode::kCar, mode::kPublic, mode::kTaxi};

constexpr std::size_t idx(mode const m) { return static_cast<std::size_t>(m); }

std::string_view to_str(mode);
std::optional<mode> parse_mode(std::string_view);

// Walk and bike never carry a fare.
constexpr bool is_fare_free(mode const m) {
  return m == mode::kWalk || m == mode::kBike;
}

// Small bitset over the five modes.
struct mode_set {
  static constexpr mode_set all() { return mode_set{0b11111U}; }
  static constexpr mode_set none() { return mode_set{0U}; }

  constexpr bool contains(mode const m) const {
    return (bits_ & (1U << idx(m))) != 0U;
  }
  constexpr mode_set& insert(mode const m) {
    bits_ |= (1U << idx(m));
    return *this;
  }
  constexpr mode_set& erase(mode const m) {
    bits_ &= ~(1U << idx(m));
    return *this;
  }
  constexpr bool empty() const { return bits_ == 0U; }
  constexpr bool subset_of(mode_set const o) const {
    return (bits_ & ~o.bits_) == 0U;
  }
  constexpr std::uint8_t bits() const { return bits_; }

  friend constexpr bool operator==(mode_set, mode_set) = default;

  std::uint8_t bits_{0U};
};

}  // namespace tripplan::geodata
