#include "tripplan/geodata/graph.h"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <tuple>

#include "fmt/core.h"

#include "nlohmann/json.hpp"

#include "tripplan/error.h"
#include "tripplan/util/csv.h"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace tripplan::geodata {

std::optional<std::size_t> next_trip(transit_line const& l,
                                     std::size_t const stop_index,
                                     std::int64_t const at) {
  if (stop_index + 1U >= l.stops_.size()) {
    throw std::out_of_range{fmt::format(
        "stop index {} out of range for line {}", stop_index, l.id_)};
  }
  auto const offset = l.offsets_s_[stop_index];
  auto const it = std::lower_bound(begin(l.departures_s_),
                                   end(l.departures_s_), at - offset);
  if (it == end(l.departures_s_)) {
    return std::nullopt;
  }
  return static_cast<std::size_t>(std::distance(begin(l.departures_s_), it));
}

std::optional<std::int64_t> next_departure(transit_line const& l,
                                           std::size_t const stop_index,
                                           std::int64_t const at) {
  auto const trip = next_trip(l, stop_index, at);
  if (!trip.has_value()) {
    return std::nullopt;
  }
  return l.departure_at(*trip, stop_index);
}

mode_speeds_t default_mode_speeds() {
  auto s = mode_speeds_t{};
  s[idx(mode::kWalk)] = 1.5;
  s[idx(mode::kBike)] = 7.0;
  s[idx(mode::kCar)] = 36.0;
  s[idx(mode::kPublic)] = 45.0;
  s[idx(mode::kTaxi)] = 36.0;
  return s;
}

std::optional<node_idx_t> map_graph::find(std::string_view const id) const {
  auto const it = id_to_idx_.find(std::string{id});
  if (it == end(id_to_idx_)) {
    return std::nullopt;
  }
  return it->second;
}

namespace {

[[noreturn]] void malformed(std::string_view const file, std::size_t const line,
                            std::string_view const field,
                            std::string_view const what) {
  throw error{error_code::kMalformedRecord,
              fmt::format("{}:{}: field '{}': {}", file, line, field, what)};
}

void expect_header(util::csv_table const& t, std::string_view const file,
                   std::vector<std::string_view> const& required,
                   std::vector<std::string_view> const& optional = {}) {
  if (t.header_.empty()) {
    return;
  }
  auto const n = t.header_.size();
  auto ok = n >= required.size() && n <= required.size() + optional.size();
  for (auto i = 0U; ok && i != n; ++i) {
    auto const expected =
        i < required.size() ? required[i] : optional[i - required.size()];
    ok = t.header_[i] == expected;
  }
  if (!ok) {
    throw error{error_code::kMalformedRecord,
                fmt::format("{}:1: unexpected header", file)};
  }
}

void load_nodes(map_graph& g, std::string_view const csv) {
  auto const t = util::parse_csv(csv);
  expect_header(t, "nodes", {"id", "lat", "lon", "kind"});
  for (auto const& row : t.rows_) {
    if (row.fields_.size() != 4U) {
      malformed("nodes", row.line_, "*", "expected 4 fields");
    }
    auto const& f = row.fields_;
    if (f[0].empty()) {
      malformed("nodes", row.line_, "id", "empty");
    }
    auto const lat = util::parse_double(f[1]);
    auto const lon = util::parse_double(f[2]);
    if (!lat.has_value() || *lat < -90.0 || *lat > 90.0) {
      malformed("nodes", row.line_, "lat", "not a latitude");
    }
    if (!lon.has_value() || *lon < -180.0 || *lon > 180.0) {
      malformed("nodes", row.line_, "lon", "not a longitude");
    }
    auto kind = node_kind::kStreetCorner;
    if (f[3] == "transit_stop") {
      kind = node_kind::kTransitStop;
    } else if (f[3] != "street_corner") {
      malformed("nodes", row.line_, "kind", f[3]);
    }
    auto const idx = static_cast<node_idx_t>(g.nodes_.size());
    if (!g.id_to_idx_.emplace(f[0], idx).second) {
      malformed("nodes", row.line_, "id", "duplicate id " + f[0]);
    }
    g.nodes_.push_back({f[0], {*lat, *lon}, kind});
  }
}

void load_lines(map_graph& g, std::string_view const text) {
  if (util::trim(text).empty()) {
    return;
  }
  auto doc = json{};
  try {
    doc = json::parse(text);
  } catch (json::parse_error const& e) {
    throw error{error_code::kMalformedRecord,
                fmt::format("transit: {}", e.what())};
  }
  if (!doc.is_array()) {
    throw error{error_code::kMalformedRecord, "transit: expected JSON array"};
  }
  auto seen = std::unordered_map<std::string, std::size_t>{};
  for (auto i = 0U; i != doc.size(); ++i) {
    auto const& j = doc[i];
    auto const where = fmt::format("transit[{}]", i);
    try {
      auto l = transit_line{};
      l.id_ = j.at("id").get<std::string>();
      for (auto const& s : j.at("stops")) {
        auto const id = s.get<std::string>();
        auto const n = g.find(id);
        if (!n.has_value()) {
          throw error{error_code::kDanglingReference,
                      fmt::format("{}: unknown stop {}", where, id)};
        }
        l.stops_.push_back(*n);
      }
      l.departures_s_ = j.at("departures_s").get<std::vector<std::int64_t>>();
      l.leg_durations_s_ =
          j.at("leg_durations_s").get<std::vector<std::int64_t>>();
      auto const fare = j.at("boarding_fare_usd").get<double>();
      if (!(fare >= 0.0)) {
        throw error{error_code::kMalformedRecord,
                    fmt::format("{}: negative boarding fare", where)};
      }
      l.boarding_fare_cents_ = std::llround(fare * 100.0);

      if (l.stops_.size() < 2U) {
        throw error{error_code::kScheduleInconsistent,
                    fmt::format("{}: fewer than two stops", where)};
      }
      if (l.leg_durations_s_.size() != l.stops_.size() - 1U) {
        throw error{error_code::kScheduleInconsistent,
                    fmt::format("{}: {} legs for {} stops", where,
                                l.leg_durations_s_.size(), l.stops_.size())};
      }
      if (std::any_of(begin(l.leg_durations_s_), end(l.leg_durations_s_),
                      [](auto const d) { return d <= 0; })) {
        throw error{error_code::kScheduleInconsistent,
                    fmt::format("{}: nonpositive leg duration", where)};
      }
      for (auto k = 0U; k != l.departures_s_.size(); ++k) {
        auto const d = l.departures_s_[k];
        if (d < 0 || d >= kServiceDayS ||
            (k != 0U && d <= l.departures_s_[k - 1U])) {
          throw error{error_code::kScheduleInconsistent,
                      fmt::format("{}: departures not strictly increasing "
                                  "within the service day",
                                  where)};
        }
      }
      l.offsets_s_.resize(l.stops_.size());
      std::exclusive_scan(begin(l.leg_durations_s_), end(l.leg_durations_s_),
                          begin(l.offsets_s_), std::int64_t{0});
      l.offsets_s_.back() =
          l.offsets_s_[l.stops_.size() - 2U] + l.leg_durations_s_.back();
      if (!seen.emplace(l.id_, g.lines_.size()).second) {
        throw error{error_code::kMalformedRecord,
                    fmt::format("{}: duplicate line id {}", where, l.id_)};
      }
      g.lines_.emplace_back(std::move(l));
    } catch (json::exception const& e) {
      throw error{error_code::kMalformedRecord,
                  fmt::format("{}: {}", where, e.what())};
    }
  }
}

void load_edges(map_graph& g, std::string_view const csv) {
  auto const t = util::parse_csv(csv);
  expect_header(t, "edges", {"from", "to", "mode", "length_m", "duration_s"},
                {"line"});
  auto const has_line_col = t.header_.size() == 6U;
  for (auto const& row : t.rows_) {
    auto const& f = row.fields_;
    if (f.size() != t.header_.size()) {
      malformed("edges", row.line_, "*",
                fmt::format("expected {} fields", t.header_.size()));
    }
    auto const from = g.find(f[0]);
    auto const to = g.find(f[1]);
    if (!from.has_value() || !to.has_value()) {
      throw error{error_code::kDanglingReference,
                  fmt::format("edges:{}: unknown node {}", row.line_,
                              from.has_value() ? f[1] : f[0])};
    }
    if (*from == *to) {
      malformed("edges", row.line_, "to", "self loop");
    }
    auto const m = parse_mode(f[2]);
    if (!m.has_value()) {
      malformed("edges", row.line_, "mode", f[2]);
    }
    auto const length = util::parse_double(f[3]);
    if (!length.has_value() || *length <= 0.0) {
      malformed("edges", row.line_, "length_m", "must be > 0");
    }
    auto const line_id = has_line_col ? std::string_view{f[5]} : "";

    if (*m != mode::kPublic) {
      auto const duration = util::parse_int(f[4]);
      if (!duration.has_value() || *duration <= 0) {
        malformed("edges", row.line_, "duration_s",
                  "must be a positive integer");
      }
      if (!line_id.empty()) {
        malformed("edges", row.line_, "line", "only public edges ride lines");
      }
      g.edges_.push_back(
          {*from, *to, *m, *length, fixed_duration{*duration}});
      continue;
    }

    if (!f[4].empty()) {
      malformed("edges", row.line_, "duration_s",
                "must be empty for public edges");
    }
    auto resolved = false;
    for (auto l = 0U; l != g.lines_.size(); ++l) {
      auto const& line = g.lines_[l];
      if (!line_id.empty() && line.id_ != line_id) {
        continue;
      }
      for (auto k = 0U; k + 1U < line.stops_.size(); ++k) {
        if (line.stops_[k] == *from && line.stops_[k + 1U] == *to) {
          g.edges_.push_back({*from, *to, *m, *length, schedule_ref{l, k}});
          resolved = true;
        }
      }
    }
    if (!resolved) {
      throw error{error_code::kDanglingReference,
                  fmt::format("edges:{}: no transit line serves {} -> {}{}",
                              row.line_, f[0], f[1],
                              line_id.empty()
                                  ? std::string{}
                                  : fmt::format(" (line {})", line_id))};
    }
  }
}

void load_speeds(map_graph& g, std::string_view const text) {
  if (util::trim(text).empty()) {
    return;
  }
  try {
    auto const doc = json::parse(text);
    for (auto const& [key, value] : doc.items()) {
      auto const m = parse_mode(key);
      if (!m.has_value()) {
        throw error{error_code::kMalformedRecord,
                    fmt::format("speeds: unknown mode {}", key)};
      }
      g.mode_speeds_[idx(*m)] = value.get<double>();
    }
  } catch (json::exception const& e) {
    throw error{error_code::kMalformedRecord,
                fmt::format("speeds: {}", e.what())};
  }
  for (auto const m : kAllModes) {
    if (!(g.mode_speeds_[idx(m)] > 0.0)) {
      throw error{error_code::kMalformedRecord,
                  fmt::format("speeds: {} must be > 0", to_str(m))};
    }
  }
  auto const& s = g.mode_speeds_;
  if (s[idx(mode::kWalk)] > s[idx(mode::kBike)] ||
      s[idx(mode::kBike)] > s[idx(mode::kCar)]) {
    throw error{error_code::kMalformedRecord,
                "speeds: expected walk <= bike <= car"};
  }
}

void index_edges(map_graph& g) {
  auto const key = [&](map_edge const& e) {
    auto const line =
        e.is_scheduled()
            ? std::string_view{g.lines_[std::get<schedule_ref>(e.traversal_)
                                            .line_]
                                   .id_}
            : std::string_view{};
    auto const stop = e.is_scheduled()
                          ? std::get<schedule_ref>(e.traversal_).stop_index_
                          : 0U;
    return std::tuple{e.from_, std::string_view{g.nodes_[e.to_].id_}, e.mode_,
                      line, stop};
  };
  std::stable_sort(begin(g.edges_), end(g.edges_),
                   [&](map_edge const& a, map_edge const& b) {
                     return key(a) < key(b);
                   });
  g.offsets_.assign(g.nodes_.size() + 1U, 0U);
  for (auto const& e : g.edges_) {
    ++g.offsets_[e.from_ + 1U];
  }
  std::partial_sum(begin(g.offsets_), end(g.offsets_), begin(g.offsets_));
}

}  // namespace

map_graph load_graph(std::string_view const nodes_csv,
                     std::string_view const edges_csv,
                     std::string_view const transit_json,
                     std::string_view const speeds_json) {
  auto g = map_graph{};
  load_nodes(g, nodes_csv);
  load_lines(g, transit_json);
  load_edges(g, edges_csv);
  load_speeds(g, speeds_json);
  index_edges(g);
  return g;
}

std::string read_file(fs::path const& p) {
  auto in = std::ifstream{p, std::ios::binary};
  if (!in) {
    throw std::runtime_error{fmt::format("cannot open {}", p.string())};
  }
  auto ss = std::stringstream{};
  ss << in.rdbuf();
  return ss.str();
}

map_graph load_graph_dir(fs::path const& dir) {
  auto const optional_file = [&](char const* name) {
    return fs::exists(dir / name) ? read_file(dir / name) : std::string{};
  };
  return load_graph(read_file(dir / "nodes.csv"), read_file(dir / "edges.csv"),
                    optional_file("transit.json"),
                    optional_file("speeds.json"));
}

}  // namespace tripplan::geodata
