#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "nlohmann/json.hpp"

#include "tripplan/auxmetrics/overlay.h"
#include "tripplan/error.h"
#include "tripplan/geodata/graph.h"
#include "tripplan/pcf/pcf.h"

namespace tripplan::service {

using nlohmann::json;

// Always ANDed into the request constraint unless the request opts out.
constexpr auto const kDefaultConstraint =
    "(mode=bike | mode=public) AFTER G(!(mode=car))";

struct network {
  geodata::map_graph graph_;
  pcf::fare_config fares_;
};

// Graph directory plus optional fares.json.
network load_network(std::filesystem::path const& dir);

// One published version of an uploaded dataset.
struct dataset_version {
  std::string name_;
  std::uint32_t version_{1U};
  std::size_t point_count_{0U};
  double radius_m_{auxmetrics::kDefaultRadiusM};
  std::string uploaded_at_;
  auxmetrics::aux_overlay overlay_;

  std::string id() const;
};

json to_json(dataset_version const&);

// Latest version per dataset name. Published sets are never mutated.
using overlay_set =
    std::map<std::string, std::shared_ptr<dataset_version const>, std::less<>>;

using profile_lookup =
    std::function<std::optional<pcf::coefficient_profile>(std::string_view)>;

struct response {
  int status_{200};
  json body_;
};

// Maps an error to an HTTP status and {"error","message"[,"position"]}.
response error_response(error const&);
response error_response(int status, std::string_view code,
                        std::string_view message);

// Runs one plan request document end to end. Both the HTTP handler and the
// CLI go through here.
//   {"from": id | [lat,lon] | {"lat":..,"lon":..}, "to": ...,
//    "depart": "HH:MM:SS" | "depart_s": int,
//    "constraint": text | "constraint_ast": {...},
//    "include_default_constraint": bool (default true),
//    "profile_id": id | "preferences": answers or profile,
//    "allowed_modes": [..], "datasets": [..] (default all),
//    "max_steps": int}
response run_plan(network const&, overlay_set const&, profile_lookup const&,
                  json const& request, std::string const& request_id);

}  // namespace tripplan::service
