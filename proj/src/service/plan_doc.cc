#include "tripplan/service/plan_doc.h"

#include <chrono>
#include <fstream>

#include "fmt/core.h"

#include "tripplan/ltl/parse.h"
#include "tripplan/search/planner.h"
#include "tripplan/util/clock.h"

namespace tripplan::service {

namespace {

constexpr auto const kMaxStepsLimit = 4096;

error bad_request(std::string const& msg) {
  return error{error_code::kInvalidRequest, msg};
}

search::endpoint parse_endpoint(json const& j, char const* field) {
  if (j.is_string()) {
    return j.get<std::string>();
  }
  if (j.is_array() && j.size() == 2U && j[0].is_number() && j[1].is_number()) {
    return geodata::latlon{j[0].get<double>(), j[1].get<double>()};
  }
  if (j.is_object() && j.contains("lat") && j.contains("lon") &&
      j["lat"].is_number() && j["lon"].is_number()) {
    return geodata::latlon{j["lat"].get<double>(), j["lon"].get<double>()};
  }
  throw bad_request(fmt::format(
      "\"{}\" must be a node id, [lat,lon] or {{\"lat\",\"lon\"}}", field));
}

std::int64_t parse_depart(json const& req) {
  if (req.contains("depart")) {
    if (!req["depart"].is_string()) {
      throw bad_request("\"depart\" must be a HH:MM:SS string");
    }
    return util::parse_clock(req["depart"].get<std::string>());
  }
  if (req.contains("depart_s")) {
    if (!req["depart_s"].is_number_integer()) {
      throw bad_request("\"depart_s\" must be an integer");
    }
    auto const s = req["depart_s"].get<std::int64_t>();
    if (s < 0 || s >= geodata::kServiceDayS) {
      throw bad_request("\"depart_s\" outside the service day");
    }
    return s;
  }
  throw bad_request("missing field \"depart\"");
}

ltl::formula parse_constraint(json const& req) {
  if (req.contains("constraint") && req.contains("constraint_ast")) {
    throw bad_request("give either \"constraint\" or \"constraint_ast\"");
  }
  auto user = std::optional<ltl::formula>{};
  if (req.contains("constraint")) {
    if (!req["constraint"].is_string()) {
      throw bad_request("\"constraint\" must be a string");
    }
    user = ltl::parse(req["constraint"].get<std::string>());
  } else if (req.contains("constraint_ast")) {
    user = ltl::from_json(req["constraint_ast"]);
  }

  auto with_default = true;
  if (req.contains("include_default_constraint")) {
    if (!req["include_default_constraint"].is_boolean()) {
      throw bad_request("\"include_default_constraint\" must be a boolean");
    }
    with_default = req["include_default_constraint"].get<bool>();
  }

  if (!with_default) {
    return user.value_or(ltl::formula{});
  }
  auto const def = ltl::parse(kDefaultConstraint);
  return user.has_value() ? ltl::formula::make_and(*user, def) : def;
}

pcf::coefficient_profile parse_preferences(json const& j) {
  if (j.is_object() && (j.contains("alpha") || j.contains("beta_time"))) {
    return pcf::parse_profile(j);
  }
  return pcf::derive_coefficients(pcf::parse_answers(j));
}

geodata::mode_set parse_modes(json const& j) {
  if (!j.is_array()) {
    throw bad_request("\"allowed_modes\" must be an array");
  }
  auto modes = geodata::mode_set::none();
  for (auto const& m : j) {
    if (!m.is_string()) {
      throw bad_request("\"allowed_modes\" entries must be strings");
    }
    auto const parsed = geodata::parse_mode(m.get<std::string>());
    if (!parsed.has_value()) {
      throw error{error_code::kUnknownMode,
                  fmt::format("unknown mode \"{}\"", m.get<std::string>())};
    }
    modes.insert(*parsed);
  }
  return modes;
}

}  // namespace

network load_network(std::filesystem::path const& dir) {
  auto n = network{geodata::load_graph_dir(dir), pcf::fare_config{}};
  auto const fares = dir / "fares.json";
  if (std::filesystem::exists(fares)) {
    auto j = json{};
    try {
      j = json::parse(geodata::read_file(fares));
    } catch (json::exception const& e) {
      throw error{error_code::kMalformedRecord,
                  fmt::format("fares.json: {}", e.what())};
    }
    n.fares_ = pcf::parse_fare_config(j);
  }
  return n;
}

std::string dataset_version::id() const {
  return fmt::format("{}.v{}", name_, version_);
}

json to_json(dataset_version const& d) {
  return {{"id", d.id()},
          {"name", d.name_},
          {"version", d.version_},
          {"point_count", d.point_count_},
          {"radius_m", d.radius_m_},
          {"uploaded_at", d.uploaded_at_}};
}

response error_response(int const status, std::string_view const code,
                        std::string_view const message) {
  return {status, {{"status", "error"}, {"error", code}, {"message", message}}};
}

response error_response(error const& e) {
  auto status = 400;
  switch (e.code()) {
    case error_code::kMalformedRecord:
    case error_code::kDanglingReference:
    case error_code::kScheduleInconsistent:
    case error_code::kInvalidRequest: status = 400; break;
    case error_code::kSyntaxError:
    case error_code::kUnknownVariable:
    case error_code::kUnknownMode:
    case error_code::kUnsupportedProgression:
    case error_code::kNonpositiveAnswer:
    case error_code::kNonpositiveRadius:
    case error_code::kNegativeQuantity: status = 422; break;
    case error_code::kUnknownNode:
    case error_code::kUnknownEndpoint:
    case error_code::kUnknownDataset: status = 404; break;
  }
  auto r = error_response(status, to_str(e.code()), e.what());
  if (e.position().has_value()) {
    r.body_["position"] = *e.position();
  }
  if (auto const* a = dynamic_cast<pcf::answer_error const*>(&e)) {
    r.body_["field"] = a->field_;
  }
  return r;
}

response run_plan(network const& net, overlay_set const& overlays,
                  profile_lookup const& profiles, json const& req,
                  std::string const& request_id) {
  auto const start = std::chrono::steady_clock::now();
  try {
    if (!req.is_object()) {
      throw bad_request("plan request must be a JSON object");
    }
    for (auto const* field : {"from", "to"}) {
      if (!req.contains(field)) {
        throw bad_request(fmt::format("missing field \"{}\"", field));
      }
    }

    auto r = search::plan_request{};
    r.from_ = search::resolve_endpoint(net.graph_,
                                       parse_endpoint(req["from"], "from"));
    r.to_ = search::resolve_endpoint(net.graph_, parse_endpoint(req["to"], "to"));
    r.depart_s_ = parse_depart(req);
    r.constraint_ = parse_constraint(req);

    if (req.contains("profile_id") && req.contains("preferences")) {
      throw bad_request("give either \"profile_id\" or \"preferences\"");
    }
    if (req.contains("profile_id")) {
      if (!req["profile_id"].is_string()) {
        throw bad_request("\"profile_id\" must be a string");
      }
      auto const id = req["profile_id"].get<std::string>();
      auto p = profiles ? profiles(id) : std::nullopt;
      if (!p.has_value()) {
        return error_response(404, "UnknownProfile",
                              fmt::format("unknown profile \"{}\"", id));
      }
      r.profile_ = *p;
    } else if (req.contains("preferences")) {
      r.profile_ = parse_preferences(req["preferences"]);
    } else {
      throw bad_request("missing field \"profile_id\" or \"preferences\"");
    }

    if (req.contains("allowed_modes")) {
      r.allowed_modes_ = parse_modes(req["allowed_modes"]);
    }

    auto active = std::vector<std::string>{};
    if (req.contains("datasets")) {
      if (!req["datasets"].is_array()) {
        throw bad_request("\"datasets\" must be an array");
      }
      for (auto const& d : req["datasets"]) {
        if (!d.is_string()) {
          throw bad_request("\"datasets\" entries must be strings");
        }
        active.push_back(d.get<std::string>());
      }
      std::sort(begin(active), end(active));
      active.erase(std::unique(begin(active), end(active)), end(active));
    } else {
      for (auto const& [name, _] : overlays) {
        active.push_back(name);
      }
    }
    for (auto const& name : active) {
      auto const it = overlays.find(name);
      if (it == end(overlays)) {
        throw error{error_code::kUnknownDataset,
                    fmt::format("unknown dataset \"{}\"", name)};
      }
      r.overlays_.push_back({name, it->second->overlay_.node_scores_});
    }
    for (auto const& name : ltl::datasets_of(r.constraint_)) {
      if (!std::binary_search(begin(active), end(active), name)) {
        throw error{error_code::kUnknownDataset,
                    fmt::format("constraint references inactive dataset "
                                "\"{}\"",
                                name)};
      }
    }

    auto opt = search::planner_options{};
    opt.fares_ = net.fares_;
    if (req.contains("max_steps")) {
      auto const& m = req["max_steps"];
      if (!m.is_number_integer() || m.get<std::int64_t>() < 1 ||
          m.get<std::int64_t>() > kMaxStepsLimit) {
        throw bad_request(fmt::format(
            "\"max_steps\" must be an integer in [1, {}]", kMaxStepsLimit));
      }
      opt.max_steps_ = m.get<std::uint32_t>();
    }

    auto const result = search::plan(net.graph_, r, opt);
    auto const elapsed = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - start)
                             .count();
    auto body = json{{"request_id", request_id},
                     {"elapsed_ms", elapsed},
                     {"stats",
                      {{"expanded", result.stats_.expanded_},
                       {"generated", result.stats_.generated_},
                       {"dominated", result.stats_.dominated_}}}};
    if (!result.itinerary_.has_value()) {
      body["status"] = "infeasible";
      body["constraint"] = ltl::print(r.constraint_);
      return {200, body};
    }
    body["status"] = "ok";
    body["itinerary"] = search::to_json(*result.itinerary_, net.graph_);
    body["geometry"] = search::to_geojson(*result.itinerary_, net.graph_);
    return {200, body};
  } catch (error const& e) {
    return error_response(e);
  } catch (json::exception const& e) {
    return error_response(400, "InvalidRequest", e.what());
  }
}

}  // namespace tripplan::service
