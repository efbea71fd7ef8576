#include "tripplan/pcf/pcf.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fmt/core.h"
#include "nlohmann/json.hpp"

using json = nlohmann::json;

namespace tripplan::pcf {

using geodata::idx;

state_vars initial_vars(std::span<std::string const> datasets,
                        std::span<double const> origin_scores) {
  if (datasets.size() != origin_scores.size()) {
    throw std::invalid_argument{"initial_vars: one score per dataset"};
  }
  auto v = state_vars{};
  for (auto i = 0U; i != datasets.size(); ++i) {
    auto const s = origin_scores[i];
    v.aux_.push_back({datasets[i], s, s, s, s, 1});
  }
  return v;
}

ltl::state_snapshot to_snapshot(state_vars const& v,
                                std::optional<mode> const m) {
  auto s = ltl::state_snapshot{};
  s.mode_ = m;
  s.time_s_ = v.time_s_;
  s.fare_cents_ = v.fare_cents_;
  s.clock_s_ = v.clock_s_;
  s.aux_.reserve(v.aux_.size());
  for (auto const& a : v.aux_) {
    s.aux_.push_back({a.dataset_, a.sum_, a.max_, a.min_, a.avg(), a.here_});
  }
  return s;
}

double coefficient_profile::beta_aux(std::string_view const dataset) const {
  auto const it = beta_aux_.find(dataset);
  return it == end(beta_aux_) ? 0.0 : it->second;
}

coefficient_profile derive_coefficients(elicitation_answers const& a) {
  auto p = coefficient_profile{};

  // alpha_M * 1h = alpha_car * hours_equivalent_M, alpha_car = 1
  p.alpha_[idx(mode::kCar)] = 1.0;
  for (auto const m : geodata::kAllModes) {
    auto const it = a.hours_equivalent_.find(m);
    auto const field = fmt::format("hours_equivalent.{}", geodata::to_str(m));
    if (m == mode::kCar) {
      if (it != end(a.hours_equivalent_) && it->second != 1.0) {
        throw answer_error{error_code::kNonpositiveAnswer, field,
                           "car is the reference mode and must be 1"};
      }
      continue;
    }
    if (it == end(a.hours_equivalent_)) {
      throw answer_error{error_code::kNonpositiveAnswer, field,
                         fmt::format("missing answer {}", field)};
    }
    if (!(it->second > 0.0) || !std::isfinite(it->second)) {
      throw answer_error{error_code::kNonpositiveAnswer, field,
                         fmt::format("{} must be > 0", field)};
    }
    p.alpha_[idx(m)] = it->second;
  }

  if (!(a.dollars_per_hour_ > 0.0) || !std::isfinite(a.dollars_per_hour_)) {
    throw answer_error{error_code::kNonpositiveAnswer, "dollars_per_hour",
                       "dollars_per_hour must be > 0"};
  }
  p.beta_time_ = a.dollars_per_hour_;

  for (auto const& [dataset, dollars] : a.dollars_per_aux_) {
    if (!(dollars >= 0.0) || !std::isfinite(dollars)) {
      throw answer_error{error_code::kNonpositiveAnswer,
                         "dollars_per_aux." + dataset,
                         fmt::format("dollars_per_aux.{} must be >= 0",
                                     dataset)};
    }
    p.beta_aux_.emplace(dataset, dollars);
  }
  return p;
}

double pcf(state_vars const& v, coefficient_profile const& p) {
  auto weighted_seconds = 0.0;
  auto fare_cents = std::int64_t{0};
  for (auto const m : geodata::kAllModes) {
    weighted_seconds +=
        p.alpha_[idx(m)] * static_cast<double>(v.time_s_[idx(m)]);
    fare_cents += v.fare_cents_[idx(m)];
  }
  auto aux = 0.0;
  for (auto const& a : v.aux_) {
    aux += p.beta_aux(a.dataset_) * a.sum_;
  }
  return p.beta_time_ * weighted_seconds / 3600.0 +
         static_cast<double>(fare_cents) / 100.0 + aux;
}

state_vars accumulate(state_vars const& v, step const& s,
                      bool const attribute_wait) {
  if (s.duration_s_ < 0 || s.wait_s_ < 0 || s.fare_cents_ < 0) {
    throw error{error_code::kNegativeQuantity,
                "step duration, wait and fare must be >= 0"};
  }
  if (s.entered_scores_.size() != v.aux_.size()) {
    throw std::invalid_argument{"accumulate: one score per dataset"};
  }
  auto next = v;
  auto const m = idx(s.mode_);
  next.time_s_[m] += s.duration_s_ + (attribute_wait ? s.wait_s_ : 0);
  next.fare_cents_[m] += geodata::is_fare_free(s.mode_) ? 0 : s.fare_cents_;
  next.clock_s_ += s.duration_s_ + s.wait_s_;
  for (auto i = 0U; i != next.aux_.size(); ++i) {
    auto& a = next.aux_[i];
    auto const score = s.entered_scores_[i];
    if (score < 0.0) {
      throw error{error_code::kNegativeQuantity, "aux score must be >= 0"};
    }
    a.sum_ += score;
    a.max_ = a.visited_ == 0 ? score : std::max(a.max_, score);
    a.min_ = a.visited_ == 0 ? score : std::min(a.min_, score);
    a.here_ = score;
    ++a.visited_;
  }
  return next;
}

std::int64_t distance_fare_cents(fare_config const& f, mode const m,
                                 double const length_m) {
  switch (m) {
    case mode::kTaxi:
      return std::llround(static_cast<double>(f.taxi_per_km_cents_) *
                          length_m / 1000.0);
    case mode::kCar:
      return std::llround(static_cast<double>(f.car_per_km_cents_) *
                          length_m / 1000.0);
    default: return 0;
  }
}

namespace {

double number_field(json const& j, std::string const& field) {
  if (!j.is_number()) {
    throw answer_error{error_code::kNonpositiveAnswer, field,
                       fmt::format("{} must be a number", field)};
  }
  return j.get<double>();
}

}  // namespace

elicitation_answers parse_answers(json const& j) {
  if (!j.is_object()) {
    throw answer_error{error_code::kNonpositiveAnswer, "",
                       "answers must be a JSON object"};
  }
  auto a = elicitation_answers{};
  if (!j.contains("hours_equivalent") || !j["hours_equivalent"].is_object()) {
    throw answer_error{error_code::kNonpositiveAnswer, "hours_equivalent",
                       "missing field hours_equivalent"};
  }
  for (auto const& [key, value] : j["hours_equivalent"].items()) {
    auto const m = geodata::parse_mode(key);
    if (!m.has_value()) {
      throw answer_error{error_code::kUnknownMode, "hours_equivalent." + key,
                         fmt::format("unknown mode {}", key)};
    }
    a.hours_equivalent_[*m] = number_field(value, "hours_equivalent." + key);
  }
  if (!j.contains("dollars_per_hour")) {
    throw answer_error{error_code::kNonpositiveAnswer, "dollars_per_hour",
                       "missing field dollars_per_hour"};
  }
  a.dollars_per_hour_ = number_field(j["dollars_per_hour"], "dollars_per_hour");
  if (j.contains("dollars_per_aux")) {
    if (!j["dollars_per_aux"].is_object()) {
      throw answer_error{error_code::kNonpositiveAnswer, "dollars_per_aux",
                         "dollars_per_aux must be an object"};
    }
    for (auto const& [key, value] : j["dollars_per_aux"].items()) {
      a.dollars_per_aux_[key] = number_field(value, "dollars_per_aux." + key);
    }
  }
  return a;
}

json to_json(elicitation_answers const& a) {
  auto hours = json::object();
  for (auto const& [m, v] : a.hours_equivalent_) {
    hours[std::string{geodata::to_str(m)}] = v;
  }
  auto aux = json::object();
  for (auto const& [d, v] : a.dollars_per_aux_) {
    aux[d] = v;
  }
  return {{"hours_equivalent", hours},
          {"dollars_per_hour", a.dollars_per_hour_},
          {"dollars_per_aux", aux}};
}

json to_json(coefficient_profile const& p) {
  auto alpha = json::object();
  for (auto const m : geodata::kAllModes) {
    alpha[std::string{geodata::to_str(m)}] = p.alpha_[idx(m)];
  }
  auto beta_aux = json::object();
  for (auto const& [d, v] : p.beta_aux_) {
    beta_aux[d] = v;
  }
  return {{"alpha", alpha}, {"beta_time", p.beta_time_}, {"beta_aux", beta_aux}};
}

coefficient_profile parse_profile(json const& j) {
  if (!j.is_object()) {
    throw answer_error{error_code::kNonpositiveAnswer, "",
                       "profile must be a JSON object"};
  }
  auto p = coefficient_profile{};
  if (j.contains("alpha")) {
    if (!j["alpha"].is_object()) {
      throw answer_error{error_code::kNonpositiveAnswer, "alpha",
                         "alpha must be an object"};
    }
    for (auto const& [key, value] : j["alpha"].items()) {
      auto const m = geodata::parse_mode(key);
      if (!m.has_value()) {
        throw answer_error{error_code::kUnknownMode, "alpha." + key,
                           fmt::format("unknown mode {}", key)};
      }
      auto const v = number_field(value, "alpha." + key);
      if (!(v > 0.0) || !std::isfinite(v)) {
        throw answer_error{error_code::kNonpositiveAnswer, "alpha." + key,
                           fmt::format("alpha.{} must be > 0", key)};
      }
      p.alpha_[idx(*m)] = v;
    }
  }
  if (!j.contains("beta_time")) {
    throw answer_error{error_code::kNonpositiveAnswer, "beta_time",
                       "missing field beta_time"};
  }
  p.beta_time_ = number_field(j["beta_time"], "beta_time");
  if (!(p.beta_time_ >= 0.0) || !std::isfinite(p.beta_time_)) {
    throw answer_error{error_code::kNonpositiveAnswer, "beta_time",
                       "beta_time must be >= 0"};
  }
  if (j.contains("beta_aux")) {
    if (!j["beta_aux"].is_object()) {
      throw answer_error{error_code::kNonpositiveAnswer, "beta_aux",
                         "beta_aux must be an object"};
    }
    for (auto const& [key, value] : j["beta_aux"].items()) {
      auto const v = number_field(value, "beta_aux." + key);
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw answer_error{error_code::kNonpositiveAnswer, "beta_aux." + key,
                           fmt::format("beta_aux.{} must be >= 0", key)};
      }
      p.beta_aux_[key] = v;
    }
  }
  return p;
}

fare_config parse_fare_config(json const& j) {
  auto f = fare_config{};
  auto const cents = [&](char const* key, std::int64_t& out) {
    if (!j.contains(key)) {
      return;
    }
    auto const v = j.at(key).get<double>();
    if (!(v >= 0.0)) {
      throw error{error_code::kMalformedRecord,
                  fmt::format("fares: {} must be >= 0", key)};
    }
    out = std::llround(v * 100.0);
  };
  try {
    cents("taxi_base_usd", f.taxi_base_cents_);
    cents("taxi_per_km_usd", f.taxi_per_km_cents_);
    cents("car_per_km_usd", f.car_per_km_cents_);
  } catch (json::exception const& e) {
    throw error{error_code::kMalformedRecord,
                fmt::format("fares: {}", e.what())};
  }
  return f;
}

}  // namespace tripplan::pcf
