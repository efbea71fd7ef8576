#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "tripplan/geodata/geo.h"
#include "tripplan/geodata/mode.h"

namespace tripplan::geodata {

using node_idx_t = std::uint32_t;
using line_idx_t = std::uint32_t;

// Service day: all clock values are seconds since midnight, within one day.
constexpr auto const kServiceDayS = std::int64_t{86'400};

enum class node_kind : std::uint8_t { kStreetCorner, kTransitStop };

struct map_node {
  std::string id_;
  latlon pos_;
  node_kind kind_{node_kind::kStreetCorner};
};

struct fixed_duration {
  std::int64_t seconds_{0};
};

// Public edges ride `line_` from stops_[stop_index_] to stops_[stop_index_+1].
struct schedule_ref {
  line_idx_t line_{0U};
  std::uint32_t stop_index_{0U};
};

struct map_edge {
  bool is_scheduled() const {
    return std::holds_alternative<schedule_ref>(traversal_);
  }

  node_idx_t from_{0U};
  node_idx_t to_{0U};
  mode mode_{mode::kWalk};
  double length_m_{0.0};
  std::variant<fixed_duration, schedule_ref> traversal_;
};

struct transit_line {
  // Departure of `trip` at stop `stop_index`.
  std::int64_t departure_at(std::size_t trip, std::size_t stop_index) const {
    return departures_s_[trip] + offsets_s_[stop_index];
  }

  std::string id_;
  std::vector<node_idx_t> stops_;
  std::vector<std::int64_t> departures_s_;  // at the first stop
  std::vector<std::int64_t> leg_durations_s_;
  std::int64_t boarding_fare_cents_{0};

  // offsets_s_[k] = sum of leg_durations_s_[0..k)
  std::vector<std::int64_t> offsets_s_;
};

// Earliest trip departing stop `stop_index` at or after `at`.
std::optional<std::size_t> next_trip(transit_line const&,
                                     std::size_t stop_index, std::int64_t at);

// Clock time of that departure, or nullopt if every trip has left.
std::optional<std::int64_t> next_departure(transit_line const&,
                                           std::size_t stop_index,
                                           std::int64_t at);

using mode_speeds_t = std::array<double, kNumModes>;

// Maximum speeds in m/s.
mode_speeds_t default_mode_speeds();

struct map_graph {
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  std::optional<node_idx_t> find(std::string_view id) const;

  // Outgoing edges, ordered by (to id, mode, line id).
  std::span<map_edge const> out_edges(node_idx_t const n) const {
    return {edges_.data() + offsets_[n], edges_.data() + offsets_[n + 1U]};
  }

  std::vector<map_node> nodes_;
  std::vector<map_edge> edges_;
  std::vector<std::uint32_t> offsets_{0U};
  std::vector<transit_line> lines_;
  mode_speeds_t mode_speeds_{default_mode_speeds()};
  std::unordered_map<std::string, node_idx_t> id_to_idx_;
};

// Parses and validates the static inputs. Sources are the file contents:
//   nodes:   CSV `id,lat,lon,kind`
//   edges:   CSV `from,to,mode,length_m,duration_s[,line]`
//   transit: JSON array of lines
//   speeds:  optional JSON object {"walk": m/s, ...}
map_graph load_graph(std::string_view nodes_csv, std::string_view edges_csv,
                     std::string_view transit_json,
                     std::string_view speeds_json = {});

// Reads nodes.csv, edges.csv, transit.json (optional) and speeds.json
// (optional) from a directory.
map_graph load_graph_dir(std::filesystem::path const&);

std::string read_file(std::filesystem::path const&);

}  // namespace tripplan::geodata
