#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tripplan/auxmetrics/kernels.h"
#include "tripplan/geodata/geo.h"
#include "tripplan/geodata/graph.h"

namespace tripplan::auxmetrics {

constexpr auto const kDefaultRadiusM = 200.0;

// User-uploaded point set (e.g. one crime incident per point).
struct aux_dataset {
  std::string id_;
  std::string name_;
  std::vector<geodata::latlon> points_;
  double default_radius_m_{kDefaultRadiusM};
};

// Per-node scores of one dataset, indexed by node index of the graph the
// overlay was built against.
struct aux_overlay {
  std::string dataset_id_;
  double radius_m_{kDefaultRadiusM};
  std::vector<double> node_scores_;
};

// Linear decay: 1 - d/r inside the radius, 0 outside.
double point_score(geodata::latlon const& node, geodata::latlon const& aux,
                   double radius_m);

// Sum of point_score over all dataset points for every graph node.
aux_overlay build_overlay(geodata::map_graph const&, aux_dataset const&,
                          double radius_m);
aux_overlay build_overlay(geodata::map_graph const&, aux_dataset const&,
                          double radius_m, kernels::isa);

double node_score(aux_overlay const&, geodata::map_graph const&,
                  std::string_view node_id);

// CSV with header `lat,lon`, at least one point.
std::vector<geodata::latlon> parse_aux_csv(std::string_view);

// Uniform lat-lon bucket grid. Cells are at least `radius` wide at every
// latitude up to `max_abs_lat`, so any point within the radius of a query
// lies in the query cell or one of its 8 neighbours.
struct point_grid {
  point_grid(std::span<geodata::latlon const> points, double radius_m,
             double max_abs_lat_deg, kernels::isa = kernels::best_isa());

  // Indices (ascending) of points whose chord distance passes the radius
  // prefilter. A superset of the points within the radius; the exact
  // great-circle test is left to the caller.
  void candidates(geodata::latlon const& q,
                  std::vector<std::uint32_t>& out) const;

  std::uint32_t rows() const { return n_rows_; }
  std::uint32_t cols() const { return n_cols_; }

private:
  std::uint64_t cell_of(geodata::latlon const&) const;

  kernels::isa isa_;
  double chord2_limit_;
  std::uint32_t n_rows_{1U}, n_cols_{1U};
  double row_height_deg_{180.0}, col_width_deg_{360.0};

  // points ordered by cell, structure of arrays
  std::vector<double> xs_, ys_, zs_;
  std::vector<std::uint32_t> point_idx_;
  std::vector<std::uint64_t> cell_keys_;
  std::vector<std::uint32_t> cell_begin_;  // size cell_keys_ + 1

  mutable std::vector<double> scratch_;
};

}  // namespace tripplan::auxmetrics
