#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nlohmann/json_fwd.hpp"

#include "tripplan/error.h"
#include "tripplan/geodata/mode.h"
#include "tripplan/ltl/eval.h"

namespace tripplan::pcf {

using geodata::kNumModes;
using geodata::mode;

// Running aggregates of one auxiliary dataset over the visited nodes.
struct aux_aggregate {
  double avg() const {
    return visited_ == 0 ? 0.0 : sum_ / static_cast<double>(visited_);
  }

  friend bool operator==(aux_aggregate const&, aux_aggregate const&) = default;

  std::string dataset_;
  double sum_{0.0};
  double max_{0.0};
  double min_{0.0};
  double here_{0.0};
  std::int64_t visited_{0};
};

struct state_vars {
  friend bool operator==(state_vars const&, state_vars const&) = default;

  std::array<std::int64_t, kNumModes> time_s_{};
  std::array<std::int64_t, kNumModes> fare_cents_{};
  std::int64_t clock_s_{0};  // seconds since departure
  std::vector<aux_aggregate> aux_;
};

// Variables at the origin: nothing spent yet, origin node scores entered.
state_vars initial_vars(std::span<std::string const> datasets,
                        std::span<double const> origin_scores);

ltl::state_snapshot to_snapshot(state_vars const&, std::optional<mode>);

struct coefficient_profile {
  std::array<double, kNumModes> alpha_{1.0, 1.0, 1.0, 1.0, 1.0};
  double beta_time_{0.0};  // dollars per hour
  std::map<std::string, double, std::less<>> beta_aux_;  // dollars per unit

  double beta_aux(std::string_view dataset) const;
};

// Invalid elicitation answer; field_ names the offending input field.
struct answer_error : public error {
  answer_error(error_code code, std::string field, std::string const& msg)
      : error{code, msg}, field_{std::move(field)} {}
  std::string field_;
};

// Answers to the two elicitation questions.
struct elicitation_answers {
  // hours of driving equivalent to one hour in the given mode (car excluded)
  std::map<mode, double> hours_equivalent_;
  double dollars_per_hour_{0.0};
  std::map<std::string, double, std::less<>> dollars_per_aux_;
};

coefficient_profile derive_coefficients(elicitation_answers const&);

// beta_T * sum_M alpha_M * T_M[h] + sum_M D_M + sum_d beta_A(d) * A_sum(d)
double pcf(state_vars const&, coefficient_profile const&);

struct step {
  mode mode_{mode::kWalk};
  std::int64_t duration_s_{0};  // in motion
  std::int64_t wait_s_{0};      // at the boarding stop, public only
  std::int64_t fare_cents_{0};
  std::span<double const> entered_scores_;  // one per dataset in vars.aux_
};

state_vars accumulate(state_vars const&, step const&,
                      bool attribute_wait = true);

struct fare_config {
  std::int64_t taxi_base_cents_{200};
  std::int64_t taxi_per_km_cents_{150};
  std::int64_t car_per_km_cents_{40};
};

// Distance-based part of the fare of one edge (taxi base excluded).
std::int64_t distance_fare_cents(fare_config const&, mode, double length_m);

// {"hours_equivalent":{"walk":3,...},"dollars_per_hour":20,
//  "dollars_per_aux":{"crime":1.0}}
// Missing or mistyped fields raise kNonpositiveAnswer naming the field.
elicitation_answers parse_answers(nlohmann::json const&);
nlohmann::json to_json(elicitation_answers const&);
nlohmann::json to_json(coefficient_profile const&);

// {"alpha":{"walk":3,...},"beta_time":20,"beta_aux":{"crime":1}}
// Omitted alphas default to 1. Alphas must be > 0, betas >= 0.
coefficient_profile parse_profile(nlohmann::json const&);

// {"taxi_base_usd":2.0,"taxi_per_km_usd":1.5,"car_per_km_usd":0.4}
fare_config parse_fare_config(nlohmann::json const&);

}  // namespace tripplan::pcf
