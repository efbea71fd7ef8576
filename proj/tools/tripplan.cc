#include <csignal>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fmt/core.h"
#include "nlohmann/json.hpp"

#include "tripplan/error.h"
#include "tripplan/service/http.h"
#include "tripplan/service/plan_doc.h"
#include "tripplan/service/service.h"
#include "tripplan/util/csv.h"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace tripplan;

namespace {

constexpr auto const kExitOk = 0;
constexpr auto const kExitInputError = 2;
constexpr auto const kExitInfeasible = 3;

// "lat,lon" becomes a coordinate pair, anything else a node id.
json endpoint_arg(std::string const& s) {
  auto const comma = s.find(',');
  if (comma != std::string::npos) {
    auto const lat = util::parse_double(util::trim(s.substr(0U, comma)));
    auto const lon = util::parse_double(util::trim(s.substr(comma + 1U)));
    if (lat.has_value() && lon.has_value()) {
      return json::array({*lat, *lon});
    }
  }
  return s;
}

struct aux_arg {
  std::string name_;
  fs::path csv_;
  std::string radius_;
};

// name=path[:radius]
aux_arg parse_aux_arg(std::string const& s) {
  auto const eq = s.find('=');
  if (eq == std::string::npos || eq == 0U) {
    throw error{error_code::kInvalidRequest,
                fmt::format("--aux expects name=csv:radius, got \"{}\"", s)};
  }
  auto a = aux_arg{s.substr(0U, eq), s.substr(eq + 1U), ""};
  auto const path = a.csv_.string();
  auto const colon = path.rfind(':');
  if (colon != std::string::npos &&
      util::parse_double(path.substr(colon + 1U)).has_value()) {
    a.radius_ = path.substr(colon + 1U);
    a.csv_ = path.substr(0U, colon);
  }
  return a;
}

int report(service::response const& r) {
  auto const& b = r.body_;
  auto msg = fmt::format("error: {}: {}", b.value("error", "Error"),
                         b.value("message", ""));
  if (b.contains("position")) {
    msg += fmt::format(" (position {})", b["position"].get<std::size_t>());
  }
  if (b.contains("field")) {
    msg += fmt::format(" (field {})", b["field"].get<std::string>());
  }
  std::cerr << msg << "\n";
  return kExitInputError;
}

struct plan_args {
  std::string graph_, from_, to_, depart_, constraints_, prefs_;
  std::vector<std::string> aux_;
  std::vector<std::string> modes_;
  bool json_{false}, geojson_{false}, no_default_{false};
  std::optional<int> max_steps_;
};

int run_plan_command(plan_args const& a) {
  auto net = service::load_network(a.graph_);

  auto overlays = service::overlay_set{};
  for (auto const& spec : a.aux_) {
    auto const aux = parse_aux_arg(spec);
    auto d = service::dataset_version{};
    d.name_ = aux.name_;
    if (!aux.radius_.empty()) {
      d.radius_m_ = *util::parse_double(aux.radius_);
    }
    auto dataset = auxmetrics::aux_dataset{};
    dataset.id_ = d.id();
    dataset.name_ = d.name_;
    dataset.points_ = auxmetrics::parse_aux_csv(geodata::read_file(aux.csv_));
    d.point_count_ = dataset.points_.size();
    d.overlay_ = auxmetrics::build_overlay(net.graph_, dataset, d.radius_m_);
    auto name = d.name_;
    overlays[std::move(name)] =
        std::make_shared<service::dataset_version const>(std::move(d));
  }

  auto req = json{{"from", endpoint_arg(a.from_)},
                  {"to", endpoint_arg(a.to_)},
                  {"depart", a.depart_},
                  {"include_default_constraint", !a.no_default_},
                  {"preferences", json::parse(geodata::read_file(a.prefs_))}};
  if (!a.constraints_.empty()) {
    req["constraint"] = std::string{util::trim(geodata::read_file(a.constraints_))};
  }
  if (!a.modes_.empty()) {
    req["allowed_modes"] = a.modes_;
  }
  if (a.max_steps_.has_value()) {
    req["max_steps"] = *a.max_steps_;
  }

  auto const r = service::run_plan(net, overlays, {}, req, "cli");
  if (r.status_ != 200) {
    return report(r);
  }
  if (r.body_["status"] == "infeasible") {
    std::cerr << "infeasible: no trajectory satisfies "
              << r.body_["constraint"].get<std::string>() << "\n";
    return kExitInfeasible;
  }
  std::cout << (a.json_ ? r.body_["itinerary"] : r.body_["geometry"]).dump(2)
            << "\n";
  return kExitOk;
}

std::string env_or(char const* name, std::string fallback) {
  auto const* v = std::getenv(name);
  return v != nullptr && *v != '\0' ? std::string{v} : fallback;
}

service::http_server* g_server = nullptr;

int run_serve_command(std::string const& graph, std::string const& data_dir,
                      std::string const& host, int const port) {
  auto s = service::service{
      service::load_network(graph),
      data_dir.empty() ? std::nullopt : std::optional<fs::path>{data_dir}};
  auto server = service::http_server{s};
  auto const bound = server.bind(host, port);
  if (bound < 0) {
    std::cerr << fmt::format("error: cannot bind {}:{}\n", host, port);
    return kExitInputError;
  }
  g_server = &server;
  std::signal(SIGINT, [](int) { g_server->stop(); });
  std::signal(SIGTERM, [](int) { g_server->stop(); });
  std::cerr << fmt::format("listening on {}:{}\n", host, bound);
  server.listen();
  return kExitOk;
}

int run_elicit_command(std::string const& answers) {
  auto const text = answers == "-" ? std::string{std::istreambuf_iterator<char>{
                                                     std::cin},
                                                 {}}
                                   : geodata::read_file(answers);
  auto const profile =
      pcf::derive_coefficients(pcf::parse_answers(json::parse(text)));
  std::cout << pcf::to_json(profile).dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  auto app = CLI::App{"Multi-modal trip planner with temporal constraints"};
  app.require_subcommand(1);

  auto pa = plan_args{};
  auto* plan = app.add_subcommand("plan", "Plan one trip");
  plan->add_option("--graph", pa.graph_, "Graph directory")->required();
  plan->add_option("--from", pa.from_, "Origin: lat,lon or node id")->required();
  plan->add_option("--to", pa.to_, "Destination: lat,lon or node id")->required();
  plan->add_option("--depart", pa.depart_, "Departure HH:MM:SS")->required();
  plan->add_option("--constraints", pa.constraints_, "Constraint file");
  plan->add_option("--prefs", pa.prefs_,
                   "Preferences: elicitation answers or profile JSON")
      ->required();
  plan->add_option("--aux", pa.aux_, "Dataset name=csv:radius");
  plan->add_option("--modes", pa.modes_, "Allowed modes")->delimiter(',');
  plan->add_option("--max-steps", pa.max_steps_, "Maximum edges per trip");
  plan->add_flag("--no-default-constraint", pa.no_default_,
                 "Do not add the default constraint");
  auto* json_flag = plan->add_flag("--json", pa.json_, "Print itinerary JSON");
  auto* geo_flag =
      plan->add_flag("--geojson", pa.geojson_, "Print route GeoJSON (default)");
  json_flag->excludes(geo_flag);

  auto graph = std::string{};
  auto data_dir = std::string{};
  auto host = std::string{"127.0.0.1"};
  auto port = 0;
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--graph", graph, "Graph directory (TRIPPLAN_GRAPH_DIR)");
  serve->add_option("--data-dir", data_dir, "Data directory (TRIPPLAN_DATA_DIR)");
  serve->add_option("--host", host, "Listen address");
  serve->add_option("--port", port, "Listen port (TRIPPLAN_PORT)");

  auto answers = std::string{"-"};
  auto* elicit =
      app.add_subcommand("elicit", "Derive coefficients from answers JSON");
  elicit->add_option("answers", answers, "Answers file, - for stdin");

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const& e) {
    auto const code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (plan->parsed()) {
      return run_plan_command(pa);
    }
    if (serve->parsed()) {
      graph = graph.empty() ? env_or("TRIPPLAN_GRAPH_DIR", "") : graph;
      data_dir = data_dir.empty() ? env_or("TRIPPLAN_DATA_DIR", "") : data_dir;
      if (port == 0) {
        port = std::stoi(env_or("TRIPPLAN_PORT", "8080"));
      }
      if (graph.empty()) {
        std::cerr << "error: --graph or TRIPPLAN_GRAPH_DIR is required\n";
        return kExitInputError;
      }
      return run_serve_command(graph, data_dir, host, port);
    }
    return run_elicit_command(answers);
  } catch (error const& e) {
    return report(service::error_response(e));
  } catch (std::exception const& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}
