#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "tripplan/geodata/mode.h"

namespace tripplan::ltl {

using geodata::mode;

enum class var_kind : std::uint8_t {
  kTime,     // T_M, seconds
  kFare,     // D_M, dollars
  kAux,      // aggregate of an uploaded dataset along the path
  kAuxHere,  // score of the dataset at the current node
  kClock     // seconds since departure
};

enum class aux_agg : std::uint8_t { kSum, kMax, kMin, kAvg };

enum class cmp_op : std::uint8_t { kLt, kLe, kEq, kGe, kGt };

std::string_view to_str(aux_agg);
std::string_view to_str(cmp_op);

struct state_var {
  friend bool operator==(state_var const&, state_var const&) = default;

  var_kind kind_{var_kind::kClock};
  mode mode_{mode::kWalk};  // kTime, kFare
  std::string dataset_;     // kAux, kAuxHere
  aux_agg agg_{aux_agg::kSum};  // kAux
};

struct mode_is {
  friend bool operator==(mode_is const&, mode_is const&) = default;
  mode mode_{mode::kWalk};
};

struct var_cmp {
  friend bool operator==(var_cmp const&, var_cmp const&) = default;
  state_var var_;
  cmp_op op_{cmp_op::kGe};
  double bound_{0.0};
};

using atom = std::variant<mode_is, var_cmp>;

enum class op : std::uint8_t {
  kFalse,
  kTrue,
  kAtom,
  kNot,
  kAnd,
  kOr,
  kNext,
  kAlways,
  kEventually,
  kAfter
};

std::string_view to_str(op);

struct node;

// Immutable, structurally shared formula tree. Copies are cheap.
class formula {
public:
  formula();  // true

  static formula constant(bool);
  static formula make_atom(atom);
  static formula make_not(formula);
  static formula make_and(formula, formula);
  static formula make_or(formula, formula);
  static formula make_next(formula);
  static formula make_always(formula);
  static formula make_eventually(formula);
  // Throws UnsupportedProgression unless lhs is a state formula.
  static formula make_after(formula lhs, formula rhs);

  op get_op() const;
  atom const& get_atom() const;
  formula lhs() const;  // unary operand / left operand
  formula rhs() const;
  std::size_t hash() const;

  bool is_true() const { return get_op() == op::kTrue; }
  bool is_false() const { return get_op() == op::kFalse; }

  // No temporal operators anywhere below.
  bool is_state_formula() const;

  // Atoms count as depth 1.
  std::size_t depth() const;
  std::size_t size() const;

  friend bool operator==(formula const&, formula const&);
  friend std::strong_ordering operator<=>(formula const&, formula const&);

private:
  friend struct formula_access;
  explicit formula(std::shared_ptr<node const>);
  std::shared_ptr<node const> n_;
};

struct node {
  op op_{op::kTrue};
  atom atom_{};
  std::shared_ptr<node const> lhs_, rhs_;
  std::size_t hash_{0U};
  std::size_t depth_{1U};
  std::size_t size_{1U};
  bool state_formula_{true};
};

// Names of all datasets referenced by aux atoms, sorted, without duplicates.
std::vector<std::string> datasets_of(formula const&);

// Canonical text, accepted back by parse(). parse(print(f)) == f.
std::string print(formula const&);

}  // namespace tripplan::ltl

template <>
struct std::hash<tripplan::ltl::formula> {
  std::size_t operator()(tripplan::ltl::formula const& f) const {
    return f.hash();
  }
};
