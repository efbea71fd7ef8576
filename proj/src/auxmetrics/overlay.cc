#include "tripplan/auxmetrics/overlay.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "fmt/core.h"

#include "tripplan/error.h"
#include "tripplan/util/csv.h"

namespace tripplan::auxmetrics {

using geodata::latlon;

namespace {

constexpr auto const kPrefilterSlack = 1.0 + 1e-6;
constexpr auto const kCellSlack = 1.0 + 1e-9;

void check_radius(double const r) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw error{error_code::kNonpositiveRadius,
                fmt::format("radius must be > 0, got {}", r)};
  }
}

double rad2deg(double const r) { return r * 180.0 / std::numbers::pi; }
double deg2rad(double const d) { return d * std::numbers::pi / 180.0; }

}  // namespace

double point_score(latlon const& node, latlon const& aux,
                   double const radius_m) {
  check_radius(radius_m);
  auto const d = geodata::great_circle_distance(node, aux);
  return d <= radius_m ? 1.0 - d / radius_m : 0.0;
}

point_grid::point_grid(std::span<latlon const> points, double const radius_m,
                       double const max_abs_lat_deg, kernels::isa const isa)
    : isa_{isa},
      chord2_limit_{kernels::chord2_for_distance(radius_m) * kPrefilterSlack} {
  check_radius(radius_m);

  // Latitude difference never exceeds the angular distance.
  auto const cell_lat = rad2deg(radius_m / geodata::kEarthRadiusM) * kCellSlack;
  n_rows_ = static_cast<std::uint32_t>(
      std::max(1.0, std::floor(180.0 / cell_lat)));
  row_height_deg_ = 180.0 / n_rows_;

  // sin(d/2R) >= cos(max_lat) * |sin(dlon/2)| for both endpoints within
  // max_lat, so dlon <= 2 asin(sin(r/2R) / cos(max_lat)).
  auto const c = std::cos(deg2rad(std::min(90.0, std::abs(max_abs_lat_deg))));
  auto const ratio =
      c > 0.0 ? std::sin(radius_m / (2.0 * geodata::kEarthRadiusM)) / c : 2.0;
  if (ratio < 1.0) {
    auto const cell_lon = rad2deg(2.0 * std::asin(ratio)) * kCellSlack;
    n_cols_ = static_cast<std::uint32_t>(std::floor(360.0 / cell_lon));
  }
  if (n_cols_ < 3U) {
    n_cols_ = 1U;
  }
  col_width_deg_ = 360.0 / n_cols_;

  auto order = std::vector<std::uint32_t>(points.size());
  std::iota(begin(order), end(order), 0U);
  auto keys = std::vector<std::uint64_t>(points.size());
  for (auto i = 0U; i != points.size(); ++i) {
    keys[i] = cell_of(points[i]);
  }
  std::stable_sort(begin(order), end(order),
                   [&](auto const a, auto const b) { return keys[a] < keys[b]; });

  xs_.reserve(points.size());
  ys_.reserve(points.size());
  zs_.reserve(points.size());
  point_idx_.reserve(points.size());
  for (auto const i : order) {
    auto const u = kernels::to_unit(points[i]);
    if (cell_keys_.empty() || cell_keys_.back() != keys[i]) {
      cell_keys_.push_back(keys[i]);
      cell_begin_.push_back(static_cast<std::uint32_t>(point_idx_.size()));
    }
    xs_.push_back(u.x_);
    ys_.push_back(u.y_);
    zs_.push_back(u.z_);
    point_idx_.push_back(i);
  }
  cell_begin_.push_back(static_cast<std::uint32_t>(point_idx_.size()));
}

std::uint64_t point_grid::cell_of(latlon const& p) const {
  auto const row = std::min(
      n_rows_ - 1U,
      static_cast<std::uint32_t>(std::floor((p.lat_ + 90.0) / row_height_deg_)));
  auto const col = std::min(
      n_cols_ - 1U,
      static_cast<std::uint32_t>(std::floor((p.lon_ + 180.0) / col_width_deg_)));
  return std::uint64_t{row} * n_cols_ + col;
}

void point_grid::candidates(latlon const& q,
                            std::vector<std::uint32_t>& out) const {
  out.clear();
  auto const u = kernels::to_unit(q);
  auto const key = cell_of(q);
  auto const row = static_cast<std::int64_t>(key / n_cols_);
  auto const col = static_cast<std::int64_t>(key % n_cols_);

  auto const scan_cell = [&](std::uint64_t const k) {
    auto const it = std::lower_bound(begin(cell_keys_), end(cell_keys_), k);
    if (it == end(cell_keys_) || *it != k) {
      return;
    }
    auto const c = static_cast<std::size_t>(std::distance(begin(cell_keys_), it));
    auto const from = cell_begin_[c];
    auto const n = cell_begin_[c + 1U] - from;
    scratch_.resize(n);
    kernels::chord2(isa_, u, {xs_.data() + from, n}, {ys_.data() + from, n},
                    {zs_.data() + from, n}, scratch_);
    for (auto i = 0U; i != n; ++i) {
      if (scratch_[i] <= chord2_limit_) {
        out.push_back(point_idx_[from + i]);
      }
    }
  };

  for (auto dr = std::int64_t{-1}; dr <= 1; ++dr) {
    auto const r = row + dr;
    if (r < 0 || r >= static_cast<std::int64_t>(n_rows_)) {
      continue;
    }
    if (n_cols_ == 1U) {
      scan_cell(static_cast<std::uint64_t>(r) * n_cols_);
      continue;
    }
    for (auto dc = std::int64_t{-1}; dc <= 1; ++dc) {
      auto const c = (col + dc + n_cols_) % n_cols_;
      scan_cell(static_cast<std::uint64_t>(r) * n_cols_ +
                static_cast<std::uint64_t>(c));
    }
  }
  std::sort(begin(out), end(out));
}

aux_overlay build_overlay(geodata::map_graph const& g, aux_dataset const& d,
                          double const radius_m) {
  return build_overlay(g, d, radius_m, kernels::best_isa());
}

aux_overlay build_overlay(geodata::map_graph const& g, aux_dataset const& d,
                          double const radius_m, kernels::isa const isa) {
  check_radius(radius_m);

  auto max_abs_lat = 0.0;
  for (auto const& p : d.points_) {
    max_abs_lat = std::max(max_abs_lat, std::abs(p.lat_));
  }
  for (auto const& n : g.nodes_) {
    max_abs_lat = std::max(max_abs_lat, std::abs(n.pos_.lat_));
  }

  auto const grid = point_grid{d.points_, radius_m, max_abs_lat, isa};
  auto o = aux_overlay{d.id_, radius_m, std::vector<double>(g.node_count())};
  auto candidates = std::vector<std::uint32_t>{};
  for (auto n = 0U; n != g.node_count(); ++n) {
    auto const pos = g.nodes_[n].pos_;
    grid.candidates(pos, candidates);
    auto score = 0.0;
    for (auto const i : candidates) {
      score += point_score(pos, d.points_[i], radius_m);
    }
    o.node_scores_[n] = score;
  }
  return o;
}

double node_score(aux_overlay const& o, geodata::map_graph const& g,
                  std::string_view const node_id) {
  auto const n = g.find(node_id);
  if (!n.has_value() || *n >= o.node_scores_.size()) {
    throw error{error_code::kUnknownNode,
                fmt::format("unknown node {}", node_id)};
  }
  return o.node_scores_[*n];
}

std::vector<latlon> parse_aux_csv(std::string_view const text) {
  auto const t = util::parse_csv(text);
  if (t.header_ != std::vector<std::string>{"lat", "lon"}) {
    throw error{error_code::kMalformedRecord,
                "aux: expected header `lat,lon`"};
  }
  auto points = std::vector<latlon>{};
  for (auto const& row : t.rows_) {
    if (row.fields_.size() != 2U) {
      throw error{error_code::kMalformedRecord,
                  fmt::format("aux:{}: expected 2 fields", row.line_)};
    }
    auto const lat = util::parse_double(row.fields_[0]);
    auto const lon = util::parse_double(row.fields_[1]);
    if (!lat.has_value() || !lon.has_value() ||
        !geodata::is_valid({*lat, *lon})) {
      throw error{error_code::kMalformedRecord,
                  fmt::format("aux:{}: invalid coordinate", row.line_)};
    }
    points.push_back({*lat, *lon});
  }
  if (points.empty()) {
    throw error{error_code::kMalformedRecord, "aux: no points"};
  }
  return points;
}

}  // namespace tripplan::auxmetrics
