#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "nlohmann/json_fwd.hpp"

#include "tripplan/geodata/graph.h"
#include "tripplan/geodata/mode.h"
#include "tripplan/ltl/eval.h"
#include "tripplan/ltl/formula.h"
#include "tripplan/pcf/pcf.h"

namespace tripplan::search {

using geodata::line_idx_t;
using geodata::map_graph;
using geodata::mode;
using geodata::mode_set;
using geodata::node_idx_t;

constexpr auto const kSnapRadiusM = 500.0;
constexpr auto const kNoLabel = std::numeric_limits<std::uint32_t>::max();

// Per-node scores of one active dataset, indexed by node index.
struct overlay_ref {
  std::string name_;
  std::span<double const> scores_;
};

struct plan_request {
  node_idx_t from_{0U};
  node_idx_t to_{0U};
  std::int64_t depart_s_{0};  // seconds since midnight
  ltl::formula constraint_;
  pcf::coefficient_profile profile_;
  mode_set allowed_modes_{mode_set::all()};
  std::vector<overlay_ref> overlays_;
};

struct label;

struct planner_options {
  // Maximum number of edges in a trajectory.
  std::uint32_t max_steps_{64U};

  // Waiting at a boarding stop counts towards T_public (otherwise it only
  // advances the clock).
  bool attribute_wait_{true};

  pcf::fare_config fares_;

  // Called for every label taken from the open list, before the goal test.
  std::function<void(label const&)> on_expand_;
};

// A partial trajectory ending at node_.
struct label {
  node_idx_t node_{0U};
  std::optional<mode> arrival_mode_;
  // Line and stop index reached when arriving by public transit.
  std::optional<geodata::schedule_ref> ride_;
  pcf::state_vars vars_;

  // Obligation after consuming this label's state as a non-final state.
  ltl::formula residual_;

  // The trajectory ending here satisfies the constraint.
  bool accepts_{false};

  double g_{0.0};
  double h_{0.0};
  std::uint32_t steps_{0U};

  // Edge that produced this label.
  std::uint32_t parent_{kNoLabel};
  std::uint32_t edge_{0U};
  std::int64_t wait_s_{0};
  std::int64_t fare_cents_{0};

  std::int64_t clock_s() const { return vars_.clock_s_; }
};

// Admissible remaining-cost estimate. Each mode's speed is the larger of
// the configured maximum and the fastest edge of that mode in the graph.
struct heuristic_table {
  heuristic_table(map_graph const&, pcf::coefficient_profile const&,
                  mode_set allowed, node_idx_t goal);

  double operator()(node_idx_t) const;

  // Dollars per metre of straight-line distance (minimum over modes).
  double dollars_per_m_{0.0};
  std::vector<double> h_;
};

// Effective maximum speed per mode in m/s.
geodata::mode_speeds_t effective_speeds(map_graph const&);

struct itinerary_step {
  std::uint32_t edge_{0U};
  node_idx_t from_{0U};
  node_idx_t to_{0U};
  mode mode_{mode::kWalk};
  std::optional<line_idx_t> line_;
  std::int64_t start_s_{0};  // boarding / departure (after waiting)
  std::int64_t end_s_{0};
  std::int64_t wait_s_{0};
  std::int64_t fare_cents_{0};
  double length_m_{0.0};
};

struct itinerary_leg {
  mode mode_{mode::kWalk};
  std::vector<node_idx_t> nodes_;
  std::vector<line_idx_t> lines_;
  std::int64_t start_s_{0};  // including the initial wait
  std::int64_t end_s_{0};
  std::int64_t wait_s_{0};
  std::int64_t fare_cents_{0};
  double length_m_{0.0};
};

struct itinerary {
  std::int64_t depart_s_{0};
  std::vector<itinerary_step> steps_;
  std::vector<itinerary_leg> legs_;
  pcf::state_vars totals_;
  double total_cost_{0.0};
  ltl::formula constraint_;
  std::vector<ltl::state_snapshot> trajectory_;  // S_0 .. S_n

  std::int64_t total_cost_cents() const;
};

struct plan_stats {
  std::uint64_t expanded_{0U};
  std::uint64_t generated_{0U};
  std::uint64_t dominated_{0U};
};

struct plan_result {
  std::optional<itinerary> itinerary_;  // nullopt: infeasible
  plan_stats stats_;
};

// Successors of `l` (one per usable outgoing edge), not yet pruned by
// dominance. Successors whose residual is false and which cannot end the
// trip here are dropped.
std::vector<label> expand(label const& l, std::uint32_t self, map_graph const&,
                          plan_request const&, planner_options const&,
                          heuristic_table const&);

label initial_label(map_graph const&, plan_request const&,
                    heuristic_table const&);

plan_result plan(map_graph const&, plan_request const&,
                 planner_options const& = {});

// Parent-chain walk from a label in `labels`, legs merged by mode.
itinerary extract_itinerary(std::span<label const> labels,
                            std::uint32_t goal, map_graph const&,
                            plan_request const&);

// Node id, or a position snapped to the nearest node within kSnapRadiusM.
using endpoint = std::variant<std::string, geodata::latlon>;
node_idx_t resolve_endpoint(map_graph const&, endpoint const&);

// Itinerary as JSON; the same bytes are served by the CLI and HTTP paths.
nlohmann::json to_json(itinerary const&, map_graph const&);

// FeatureCollection with one LineString per leg.
nlohmann::json to_geojson(itinerary const&, map_graph const&);

}  // namespace tripplan::search
