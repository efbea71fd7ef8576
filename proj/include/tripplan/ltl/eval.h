#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tripplan/geodata/mode.h"
#include "tripplan/ltl/formula.h"

namespace tripplan::ltl {

struct aux_reading {
  std::string dataset_;
  double sum_{0.0};
  double max_{0.0};
  double min_{0.0};
  double avg_{0.0};
  double here_{0.0};
};

// One state S_i of a trajectory, as seen by the atoms.
struct state_snapshot {
  std::optional<mode> mode_;  // none for the initial state
  std::array<std::int64_t, geodata::kNumModes> time_s_{};
  std::array<std::int64_t, geodata::kNumModes> fare_cents_{};
  std::int64_t clock_s_{0};
  std::vector<aux_reading> aux_;
};

// Tolerances for numeric comparisons.
constexpr auto const kFareTolCents = 1e-6;
constexpr auto const kAuxTol = 1e-9;

bool holds(atom const&, state_snapshot const&);

// Finite-trace satisfaction of the whole trajectory (non-empty).
bool eval(formula const&, std::span<state_snapshot const> trajectory);

enum class verdict : std::uint8_t { kFalse, kTrue, kPending };

std::string_view to_str(verdict);

struct progress_result {
  verdict verdict_{verdict::kPending};
  formula residual_;
};

// Consumes one state. With is_final the state is the last one and the
// verdict is never pending. Otherwise the residual is the obligation on the
// remaining suffix: kFalse iff it simplified to false, kTrue iff to true.
progress_result progress(formula const&, state_snapshot const&, bool is_final);

// Simplifying constructors used to keep residuals small and canonical:
// constants folded, conjunctions/disjunctions flattened, sorted and
// deduplicated.
formula simplify_not(formula);
formula simplify_and(formula, formula);
formula simplify_or(formula, formula);
formula simplify_next(formula);
formula simplify_always(formula);
formula simplify_eventually(formula);
formula simplify_after(formula, formula);

// Semantically equivalent canonical form built from the constructors above.
formula canonicalize(formula const&);

}  // namespace tripplan::ltl
