#include "tripplan/ltl/eval.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tripplan/error.h"

namespace tripplan::ltl {

std::string_view to_str(verdict const v) {
  switch (v) {
    case verdict::kFalse: return "false";
    case verdict::kTrue: return "true";
    case verdict::kPending: return "pending";
  }
  return "?";
}

namespace {

bool compare(double const v, cmp_op const o, double const b,
             double const tol) {
  switch (o) {
    case cmp_op::kLt: return v < b - tol;
    case cmp_op::kLe: return v <= b + tol;
    case cmp_op::kEq: return std::abs(v - b) <= tol;
    case cmp_op::kGe: return v >= b - tol;
    case cmp_op::kGt: return v > b + tol;
  }
  return false;
}

bool compare_int(std::int64_t const v, cmp_op const o, double const b) {
  auto const x = static_cast<double>(v);
  switch (o) {
    case cmp_op::kLt: return x < b;
    case cmp_op::kLe: return x <= b;
    case cmp_op::kEq: return x == b;
    case cmp_op::kGe: return x >= b;
    case cmp_op::kGt: return x > b;
  }
  return false;
}

aux_reading const* find_reading(state_snapshot const& s,
                                std::string const& dataset) {
  for (auto const& r : s.aux_) {
    if (r.dataset_ == dataset) {
      return &r;
    }
  }
  return nullptr;
}

bool holds_cmp(var_cmp const& c, state_snapshot const& s) {
  switch (c.var_.kind_) {
    case var_kind::kTime:
      return compare_int(s.time_s_[geodata::idx(c.var_.mode_)], c.op_,
                         c.bound_);
    case var_kind::kClock: return compare_int(s.clock_s_, c.op_, c.bound_);
    case var_kind::kFare:
      return compare(
          static_cast<double>(s.fare_cents_[geodata::idx(c.var_.mode_)]),
          c.op_, c.bound_ * 100.0, kFareTolCents);
    case var_kind::kAuxHere: {
      auto const* r = find_reading(s, c.var_.dataset_);
      return compare(r == nullptr ? 0.0 : r->here_, c.op_, c.bound_, kAuxTol);
    }
    case var_kind::kAux: {
      auto const* r = find_reading(s, c.var_.dataset_);
      auto v = 0.0;
      if (r != nullptr) {
        switch (c.var_.agg_) {
          case aux_agg::kSum: v = r->sum_; break;
          case aux_agg::kMax: v = r->max_; break;
          case aux_agg::kMin: v = r->min_; break;
          case aux_agg::kAvg: v = r->avg_; break;
        }
      }
      return compare(v, c.op_, c.bound_, kAuxTol);
    }
  }
  return false;
}

// sigma[i] |= f, clause by clause.
bool holds_at(formula const& f, std::span<state_snapshot const> sigma,
              std::size_t const i) {
  auto const n = sigma.size() - 1U;
  switch (f.get_op()) {
    case op::kTrue: return true;
    case op::kFalse: return false;
    case op::kAtom: return holds(f.get_atom(), sigma[i]);
    case op::kNot: return !holds_at(f.lhs(), sigma, i);
    case op::kAnd:
      return holds_at(f.lhs(), sigma, i) && holds_at(f.rhs(), sigma, i);
    case op::kOr:
      return holds_at(f.lhs(), sigma, i) || holds_at(f.rhs(), sigma, i);
    case op::kNext: return i + 1U <= n && holds_at(f.lhs(), sigma, i + 1U);
    case op::kAlways:
      for (auto j = i; j <= n; ++j) {
        if (!holds_at(f.lhs(), sigma, j)) {
          return false;
        }
      }
      return true;
    case op::kEventually:
      for (auto j = i; j <= n; ++j) {
        if (holds_at(f.lhs(), sigma, j)) {
          return true;
        }
      }
      return false;
    case op::kAfter:
      for (auto j = i; j < n; ++j) {
        if (holds_at(f.lhs(), sigma, j) && !holds_at(f.rhs(), sigma, j + 1U)) {
          return false;
        }
      }
      return true;
  }
  return false;
}

// Truth on the single-state suffix made of the last state only.
bool holds_last(formula const& f, state_snapshot const& s) {
  switch (f.get_op()) {
    case op::kTrue: return true;
    case op::kFalse: return false;
    case op::kAtom: return holds(f.get_atom(), s);
    case op::kNot: return !holds_last(f.lhs(), s);
    case op::kAnd: return holds_last(f.lhs(), s) && holds_last(f.rhs(), s);
    case op::kOr: return holds_last(f.lhs(), s) || holds_last(f.rhs(), s);
    case op::kNext: return false;
    case op::kAlways:
    case op::kEventually: return holds_last(f.lhs(), s);
    case op::kAfter: return true;
  }
  return false;
}

// Obligation on sigma[1] given S_0 = s, assuming sigma[1] exists.
formula prog(formula const& f, state_snapshot const& s) {
  switch (f.get_op()) {
    case op::kTrue:
    case op::kFalse: return f;
    case op::kAtom: return formula::constant(holds(f.get_atom(), s));
    case op::kNot: return simplify_not(prog(f.lhs(), s));
    case op::kAnd: {
      auto l = prog(f.lhs(), s);
      if (l.is_false()) {
        return l;
      }
      return simplify_and(std::move(l), prog(f.rhs(), s));
    }
    case op::kOr: {
      auto l = prog(f.lhs(), s);
      if (l.is_true()) {
        return l;
      }
      return simplify_or(std::move(l), prog(f.rhs(), s));
    }
    case op::kNext: return f.lhs();
    case op::kAlways: return simplify_and(prog(f.lhs(), s), f);
    case op::kEventually: return simplify_or(prog(f.lhs(), s), f);
    case op::kAfter:
      if (!f.lhs().is_state_formula()) {
        throw error{error_code::kUnsupportedProgression,
                    "the trigger of AFTER must not contain temporal operators"};
      }
      return holds_last(f.lhs(), s) ? simplify_and(f.rhs(), f) : f;
  }
  return f;
}

void collect(formula const& f, op const o, std::vector<formula>& out) {
  if (f.get_op() == o) {
    collect(f.lhs(), o, out);
    collect(f.rhs(), o, out);
  } else {
    out.push_back(f);
  }
}

// Shared flatten/sort/dedup for & (absorbing false, neutral true) and |.
formula simplify_assoc(op const o, formula a, formula b) {
  auto const absorbing = o == op::kAnd ? op::kFalse : op::kTrue;
  auto const neutral = o == op::kAnd ? op::kTrue : op::kFalse;
  if (a.get_op() == absorbing || b.get_op() == absorbing) {
    return formula::constant(absorbing == op::kTrue);
  }
  if (a.get_op() == neutral) {
    return b;
  }
  if (b.get_op() == neutral) {
    return a;
  }
  auto parts = std::vector<formula>{};
  collect(a, o, parts);
  collect(b, o, parts);
  std::sort(begin(parts), end(parts));
  parts.erase(std::unique(begin(parts), end(parts)), end(parts));
  for (auto const& p : parts) {
    if (p.get_op() == op::kNot &&
        std::binary_search(begin(parts), end(parts), p.lhs())) {
      return formula::constant(absorbing == op::kTrue);
    }
  }
  auto result = parts.back();
  for (auto it = std::next(parts.rbegin()); it != parts.rend(); ++it) {
    result = o == op::kAnd ? formula::make_and(*it, std::move(result))
                           : formula::make_or(*it, std::move(result));
  }
  return result;
}

}  // namespace

bool holds(atom const& a, state_snapshot const& s) {
  if (auto const* m = std::get_if<mode_is>(&a)) {
    return s.mode_.has_value() && *s.mode_ == m->mode_;
  }
  return holds_cmp(std::get<var_cmp>(a), s);
}

bool eval(formula const& f, std::span<state_snapshot const> trajectory) {
  if (trajectory.empty()) {
    throw std::invalid_argument{"eval: empty trajectory"};
  }
  return holds_at(f, trajectory, 0U);
}

progress_result progress(formula const& f, state_snapshot const& s,
                         bool const is_final) {
  if (is_final) {
    auto const v = holds_last(f, s);
    return {v ? verdict::kTrue : verdict::kFalse, formula::constant(v)};
  }
  auto r = prog(f, s);
  auto const v = r.is_true()    ? verdict::kTrue
                 : r.is_false() ? verdict::kFalse
                                : verdict::kPending;
  return {v, std::move(r)};
}

formula simplify_not(formula f) {
  switch (f.get_op()) {
    case op::kTrue: return formula::constant(false);
    case op::kFalse: return formula::constant(true);
    case op::kNot: return f.lhs();
    default: return formula::make_not(std::move(f));
  }
}

formula simplify_and(formula a, formula b) {
  return simplify_assoc(op::kAnd, std::move(a), std::move(b));
}

formula simplify_or(formula a, formula b) {
  return simplify_assoc(op::kOr, std::move(a), std::move(b));
}

formula simplify_next(formula f) {
  // strong next: false on the last state, so X(true) stays
  return f.is_false() ? f : formula::make_next(std::move(f));
}

formula simplify_always(formula f) {
  if (f.is_true() || f.is_false() || f.get_op() == op::kAlways) {
    return f;
  }
  return formula::make_always(std::move(f));
}

formula simplify_eventually(formula f) {
  if (f.is_true() || f.is_false() || f.get_op() == op::kEventually) {
    return f;
  }
  return formula::make_eventually(std::move(f));
}

formula simplify_after(formula lhs, formula rhs) {
  if (lhs.is_false() || rhs.is_true()) {
    return formula::constant(true);
  }
  return formula::make_after(std::move(lhs), std::move(rhs));
}

formula canonicalize(formula const& f) {
  switch (f.get_op()) {
    case op::kTrue:
    case op::kFalse:
    case op::kAtom: return f;
    case op::kNot: return simplify_not(canonicalize(f.lhs()));
    case op::kAnd:
      return simplify_and(canonicalize(f.lhs()), canonicalize(f.rhs()));
    case op::kOr:
      return simplify_or(canonicalize(f.lhs()), canonicalize(f.rhs()));
    case op::kNext: return simplify_next(canonicalize(f.lhs()));
    case op::kAlways: return simplify_always(canonicalize(f.lhs()));
    case op::kEventually: return simplify_eventually(canonicalize(f.lhs()));
    case op::kAfter:
      return simplify_after(canonicalize(f.lhs()), canonicalize(f.rhs()));
  }
  return f;
}

}  // namespace tripplan::ltl
