#include "tripplan/service/service.h"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>

#include "fmt/core.h"

#include "tripplan/util/csv.h"

namespace fs = std::filesystem;

namespace tripplan::service {

namespace {

std::string utc_now() {
  auto const t = std::chrono::system_clock::to_time_t(
      std::chrono::system_clock::now());
  auto tm = std::tm{};
  gmtime_r(&t, &tm);
  return fmt::format("{:04}-{:02}-{:02}T{:02}:{:02}:{:02}Z", tm.tm_year + 1900,
                     tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min,
                     tm.tm_sec);
}

bool valid_name(std::string_view const name) {
  return !name.empty() && name.size() <= 64U &&
         std::all_of(begin(name), end(name), [](char const c) {
           return std::isalnum(static_cast<unsigned char>(c)) != 0 ||
                  c == '_' || c == '-';
         });
}

void write_atomically(fs::path const& p, std::string_view const content) {
  fs::create_directories(p.parent_path());
  auto const tmp = fs::path{p}.concat(".tmp");
  {
    auto out = std::ofstream{tmp, std::ios::binary | std::ios::trunc};
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
      throw std::runtime_error{fmt::format("cannot write {}", tmp.string())};
    }
  }
  fs::rename(tmp, p);
}

json parse_body(std::string_view const body) {
  try {
    return json::parse(body);
  } catch (json::exception const& e) {
    throw error{error_code::kInvalidRequest,
                fmt::format("body is not valid JSON: {}", e.what())};
  }
}

}  // namespace

service::service(network net, std::optional<fs::path> data_dir)
    : net_{std::move(net)},
      data_dir_{std::move(data_dir)},
      overlays_{std::make_shared<overlay_set const>()} {
  if (data_dir_.has_value()) {
    load();
  }
}

std::shared_ptr<overlay_set const> service::overlays() const {
  auto const lock = std::scoped_lock{overlays_mutex_};
  return overlays_;
}

std::optional<pcf::coefficient_profile> service::profile(
    std::string_view const id) const {
  auto const lock = std::scoped_lock{profiles_mutex_};
  auto const it = profiles_.find(id);
  if (it == end(profiles_)) {
    return std::nullopt;
  }
  return it->second;
}

std::shared_ptr<dataset_version const> service::publish(
    std::string const& name, double const radius, std::string_view const csv,
    std::uint32_t const version, std::string uploaded_at) {
  auto d = dataset_version{};
  d.name_ = name;
  d.version_ = version;
  d.radius_m_ = radius;
  d.uploaded_at_ = std::move(uploaded_at);

  auto dataset = auxmetrics::aux_dataset{};
  dataset.id_ = d.id();
  dataset.name_ = name;
  dataset.points_ = auxmetrics::parse_aux_csv(csv);
  dataset.default_radius_m_ = radius;
  d.point_count_ = dataset.points_.size();
  d.overlay_ = auxmetrics::build_overlay(net_.graph_, dataset, radius);
  auto published = std::make_shared<dataset_version const>(std::move(d));

  auto const lock = std::scoped_lock{overlays_mutex_};
  auto next = std::make_shared<overlay_set>(*overlays_);
  (*next)[name] = published;
  overlays_ = std::move(next);
  return published;
}

response service::upload_dataset(std::string_view const name,
                                 std::string_view const radius_text,
                                 std::string_view const csv) {
  try {
    if (!valid_name(name)) {
      return error_response(400, "InvalidRequest",
                            "dataset name must be 1-64 characters of "
                            "[A-Za-z0-9_-]");
    }
    auto radius = auxmetrics::kDefaultRadiusM;
    if (!util::trim(radius_text).empty()) {
      auto const r = util::parse_double(util::trim(radius_text));
      if (!r.has_value() || !std::isfinite(*r)) {
        return error_response(400, "InvalidRequest", "radius must be a number");
      }
      radius = *r;
    }
    if (!(radius > 0.0)) {
      throw error{error_code::kNonpositiveRadius, "radius must be > 0"};
    }

    auto const lock = std::scoped_lock{upload_mutex_};
    auto const current = overlays();
    auto const it = current->find(name);
    auto const version = it == end(*current) ? 1U : it->second->version_ + 1U;
    auto const published =
        publish(std::string{name}, radius, csv, version, utc_now());
    if (data_dir_.has_value()) {
      write_atomically(*data_dir_ / "datasets" / (published->id() + ".csv"),
                       csv);
      write_index();
    }
    return {201, to_json(*published)};
  } catch (error const& e) {
    return error_response(e);
  }
}

response service::list_datasets() const {
  auto list = json::array();
  for (auto const& [_, d] : *overlays()) {
    list.push_back(to_json(*d));
  }
  return {200, {{"datasets", list}}};
}

response service::questions() {
  auto modes = json::array();
  for (auto const m : geodata::kAllModes) {
    if (m != geodata::mode::kCar) {
      modes.push_back(geodata::to_str(m));
    }
  }
  auto const q = json::array(
      {{{"id", "hours_equivalent"},
        {"kind", "per_mode"},
        {"modes", modes},
        {"unit", "hours"},
        {"text",
         "One hour travelling by this mode feels as costly as how many "
         "hours of driving?"}},
       {{"id", "dollars_per_hour"},
        {"kind", "number"},
        {"unit", "USD"},
        {"text", "How many dollars would you pay to drive one hour less?"}},
       {{"id", "dollars_per_aux"},
        {"kind", "per_dataset"},
        {"unit", "USD"},
        {"optional", true},
        {"text",
         "How many dollars would you pay to avoid one unit of this "
         "dataset's score?"}}});
  return {200, {{"questions", q}}};
}

response service::submit_answers(std::string_view const body) {
  try {
    auto const answers = pcf::parse_answers(parse_body(body));
    auto const profile = pcf::derive_coefficients(answers);
    auto id = std::string{};
    {
      auto const lock = std::scoped_lock{profiles_mutex_};
      id = fmt::format("p{}", next_profile_++);
      profiles_.emplace(id, profile);
    }
    if (data_dir_.has_value()) {
      auto const doc = json{{"id", id},
                            {"answers", pcf::to_json(answers)},
                            {"profile", pcf::to_json(profile)}};
      write_atomically(*data_dir_ / "profiles" / (id + ".json"), doc.dump(2));
      write_index();
    }
    return {201, {{"profile_id", id}, {"profile", pcf::to_json(profile)}}};
  } catch (error const& e) {
    return error_response(e);
  }
}

response service::get_profile(std::string_view const id) const {
  auto const p = profile(id);
  if (!p.has_value()) {
    return error_response(404, "UnknownProfile",
                          fmt::format("unknown profile \"{}\"", id));
  }
  return {200, {{"profile_id", id}, {"profile", pcf::to_json(*p)}}};
}

response service::plan(std::string_view const body) const {
  auto const request_id = fmt::format("r{}", next_request_++);
  auto req = json{};
  try {
    req = parse_body(body);
  } catch (error const& e) {
    return error_response(e);
  }
  auto const snapshot = overlays();
  return run_plan(
      net_, *snapshot,
      [&](std::string_view const id) { return profile(id); }, req,
      request_id);
}

void service::write_index() const {
  auto const lock = std::scoped_lock{index_mutex_};

  auto datasets = json::array();
  for (auto const& [_, d] : *overlays()) {
    datasets.push_back(to_json(*d));
  }
  auto profiles = json::array();
  auto next_profile = std::uint64_t{};
  {
    auto const plock = std::scoped_lock{profiles_mutex_};
    for (auto const& [id, _] : profiles_) {
      profiles.push_back(id);
    }
    next_profile = next_profile_;
  }
  auto const index = json{{"datasets", datasets},
                          {"profiles", profiles},
                          {"next_profile", next_profile}};
  write_atomically(*data_dir_ / "index.json", index.dump(2));
}

void service::load() {
  auto const index_path = *data_dir_ / "index.json";
  if (!fs::exists(index_path)) {
    return;
  }
  auto const index = json::parse(geodata::read_file(index_path));
  for (auto const& d : index.at("datasets")) {
    auto const name = d.at("name").get<std::string>();
    auto const version = d.at("version").get<std::uint32_t>();
    auto const csv = geodata::read_file(
        *data_dir_ / "datasets" / fmt::format("{}.v{}.csv", name, version));
    publish(name, d.at("radius_m").get<double>(), csv, version,
            d.at("uploaded_at").get<std::string>());
  }
  for (auto const& id : index.at("profiles")) {
    auto const doc = json::parse(geodata::read_file(
        *data_dir_ / "profiles" / (id.get<std::string>() + ".json")));
    profiles_.emplace(id.get<std::string>(),
                      pcf::parse_profile(doc.at("profile")));
  }
  next_profile_ = index.at("next_profile").get<std::uint64_t>();
}

}  // namespace tripplan::service
