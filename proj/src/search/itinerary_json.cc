#include "tripplan/search/planner.h"

#include "nlohmann/json.hpp"

#include "tripplan/util/clock.h"

using json = nlohmann::json;

namespace tripplan::search {

namespace {

json per_mode(std::array<std::int64_t, geodata::kNumModes> const& v) {
  auto j = json::object();
  for (auto const m : geodata::kAllModes) {
    j[std::string{geodata::to_str(m)}] = v[geodata::idx(m)];
  }
  return j;
}

json totals_json(pcf::state_vars const& v) {
  auto aux = json::object();
  for (auto const& a : v.aux_) {
    aux[a.dataset_] = {{"sum", a.sum_},   {"max", a.max_},
                       {"min", a.min_},   {"avg", a.avg()},
                       {"here", a.here_}, {"visited", a.visited_}};
  }
  return {{"time_s", per_mode(v.time_s_)},
          {"fare_cents", per_mode(v.fare_cents_)},
          {"clock_s", v.clock_s_},
          {"aux", aux}};
}

}  // namespace

json to_json(itinerary const& it, map_graph const& g) {
  auto legs = json::array();
  for (auto const& l : it.legs_) {
    auto nodes = json::array();
    for (auto const n : l.nodes_) {
      nodes.push_back(g.nodes_[n].id_);
    }
    auto lines = json::array();
    for (auto const line : l.lines_) {
      lines.push_back(g.lines_[line].id_);
    }
    legs.push_back({{"mode", geodata::to_str(l.mode_)},
                    {"from", g.nodes_[l.nodes_.front()].id_},
                    {"to", g.nodes_[l.nodes_.back()].id_},
                    {"nodes", nodes},
                    {"lines", lines},
                    {"start", util::format_clock(l.start_s_)},
                    {"end", util::format_clock(l.end_s_)},
                    {"start_s", l.start_s_},
                    {"end_s", l.end_s_},
                    {"duration_s", l.end_s_ - l.start_s_},
                    {"wait_s", l.wait_s_},
                    {"fare_cents", l.fare_cents_},
                    {"distance_m", l.length_m_}});
  }
  auto const arrive =
      it.steps_.empty() ? it.depart_s_ : it.steps_.back().end_s_;
  return {{"constraint", ltl::print(it.constraint_)},
          {"depart", util::format_clock(it.depart_s_)},
          {"arrive", util::format_clock(arrive)},
          {"total_cost", it.total_cost_},
          {"total_cost_cents", it.total_cost_cents()},
          {"legs", legs},
          {"totals", totals_json(it.totals_)}};
}

json to_geojson(itinerary const& it, map_graph const& g) {
  auto features = json::array();
  for (auto const& l : it.legs_) {
    auto coords = json::array();
    for (auto const n : l.nodes_) {
      coords.push_back({g.nodes_[n].pos_.lon_, g.nodes_[n].pos_.lat_});
    }
    features.push_back(
        {{"type", "Feature"},
         {"geometry", {{"type", "LineString"}, {"coordinates", coords}}},
         {"properties",
          {{"mode", geodata::to_str(l.mode_)},
           {"start", util::format_clock(l.start_s_)},
           {"end", util::format_clock(l.end_s_)},
           {"fare_cents", l.fare_cents_},
           {"duration_s", l.end_s_ - l.start_s_}}}});
  }
  return {{"type", "FeatureCollection"}, {"features", features}};
}

}  // namespace tripplan::search
