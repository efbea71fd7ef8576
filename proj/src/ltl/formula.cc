#include "tripplan/ltl/formula.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>

#include "fmt/core.h"

#include "tripplan/error.h"

namespace tripplan::ltl {

std::string_view to_str(aux_agg const a) {
  switch (a) {
    case aux_agg::kSum: return "sum";
    case aux_agg::kMax: return "max";
    case aux_agg::kMin: return "min";
    case aux_agg::kAvg: return "avg";
  }
  return "?";
}

std::string_view to_str(cmp_op const o) {
  switch (o) {
    case cmp_op::kLt: return "<";
    case cmp_op::kLe: return "<=";
    case cmp_op::kEq: return "=";
    case cmp_op::kGe: return ">=";
    case cmp_op::kGt: return ">";
  }
  return "?";
}

std::string_view to_str(op const o) {
  switch (o) {
    case op::kFalse: return "false";
    case op::kTrue: return "true";
    case op::kAtom: return "atom";
    case op::kNot: return "not";
    case op::kAnd: return "and";
    case op::kOr: return "or";
    case op::kNext: return "next";
    case op::kAlways: return "always";
    case op::kEventually: return "eventually";
    case op::kAfter: return "after";
  }
  return "?";
}

namespace {

std::size_t mix(std::size_t h, std::size_t const v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6U) + (h >> 2U);
  return h;
}

std::size_t hash_atom(atom const& a) {
  return std::visit(
      [](auto const& x) -> std::size_t {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, mode_is>) {
          return mix(1U, geodata::idx(x.mode_));
        } else {
          auto h = mix(2U, static_cast<std::size_t>(x.var_.kind_));
          h = mix(h, geodata::idx(x.var_.mode_));
          h = mix(h, std::hash<std::string>{}(x.var_.dataset_));
          h = mix(h, static_cast<std::size_t>(x.var_.agg_));
          h = mix(h, static_cast<std::size_t>(x.op_));
          return mix(h, std::hash<double>{}(x.bound_));
        }
      },
      a);
}

template <typename T>
int cmp3(T const& a, T const& b) {
  return a < b ? -1 : (b < a ? 1 : 0);
}

int compare_atoms(atom const& a, atom const& b) {
  if (auto const c = cmp3(a.index(), b.index()); c != 0) {
    return c;
  }
  if (auto const* ma = std::get_if<mode_is>(&a)) {
    return cmp3(ma->mode_, std::get<mode_is>(b).mode_);
  }
  auto const& x = std::get<var_cmp>(a);
  auto const& y = std::get<var_cmp>(b);
  if (auto const c = cmp3(x.var_.kind_, y.var_.kind_); c != 0) return c;
  if (auto const c = cmp3(x.var_.mode_, y.var_.mode_); c != 0) return c;
  if (auto const c = x.var_.dataset_.compare(y.var_.dataset_); c != 0) {
    return c < 0 ? -1 : 1;
  }
  if (auto const c = cmp3(x.var_.agg_, y.var_.agg_); c != 0) return c;
  if (auto const c = cmp3(x.op_, y.op_); c != 0) return c;
  return cmp3(x.bound_, y.bound_);
}

int compare_nodes(node const* a, node const* b) {
  if (a == b) {
    return 0;
  }
  if (a == nullptr || b == nullptr) {
    return a == nullptr ? -1 : 1;
  }
  if (auto const c = cmp3(a->op_, b->op_); c != 0) {
    return c;
  }
  if (a->op_ == op::kAtom) {
    return compare_atoms(a->atom_, b->atom_);
  }
  if (auto const c = compare_nodes(a->lhs_.get(), b->lhs_.get()); c != 0) {
    return c;
  }
  return compare_nodes(a->rhs_.get(), b->rhs_.get());
}

bool equal_nodes(node const* a, node const* b) {
  if (a == b) {
    return true;
  }
  if (a == nullptr || b == nullptr || a->hash_ != b->hash_) {
    return false;
  }
  return compare_nodes(a, b) == 0;
}

std::shared_ptr<node const> const& true_node() {
  static auto const n = [] {
    auto x = std::make_shared<node>();
    x->op_ = op::kTrue;
    x->hash_ = mix(0U, static_cast<std::size_t>(op::kTrue));
    return std::shared_ptr<node const>{std::move(x)};
  }();
  return n;
}

std::shared_ptr<node const> const& false_node() {
  static auto const n = [] {
    auto x = std::make_shared<node>();
    x->op_ = op::kFalse;
    x->hash_ = mix(0U, static_cast<std::size_t>(op::kFalse));
    return std::shared_ptr<node const>{std::move(x)};
  }();
  return n;
}

bool is_temporal(op const o) {
  return o == op::kNext || o == op::kAlways || o == op::kEventually ||
         o == op::kAfter;
}

}  // namespace

struct formula_access {
  static std::shared_ptr<node const> const& ptr(formula const& f) {
    return f.n_;
  }
  static formula wrap(std::shared_ptr<node const> n) {
    return formula{std::move(n)};
  }
  static formula build(op const o, std::shared_ptr<node const> lhs,
                       std::shared_ptr<node const> rhs) {
    auto n = std::make_shared<node>();
    n->op_ = o;
    auto h = mix(0U, static_cast<std::size_t>(o));
    n->depth_ = 1U;
    n->size_ = 1U;
    n->state_formula_ = !is_temporal(o);
    for (auto const* c : {lhs.get(), rhs.get()}) {
      if (c != nullptr) {
        h = mix(h, c->hash_);
        n->depth_ = std::max(n->depth_, c->depth_ + 1U);
        n->size_ += c->size_;
        n->state_formula_ = n->state_formula_ && c->state_formula_;
      }
    }
    n->hash_ = h;
    n->lhs_ = std::move(lhs);
    n->rhs_ = std::move(rhs);
    return formula{std::shared_ptr<node const>{std::move(n)}};
  }
};

formula::formula() : n_{true_node()} {}

formula::formula(std::shared_ptr<node const> n) : n_{std::move(n)} {}

formula formula::constant(bool const v) {
  return formula{v ? true_node() : false_node()};
}

formula formula::make_atom(atom a) {
  auto n = std::make_shared<node>();
  n->op_ = op::kAtom;
  n->hash_ = mix(static_cast<std::size_t>(op::kAtom), hash_atom(a));
  n->atom_ = std::move(a);
  return formula{std::shared_ptr<node const>{std::move(n)}};
}

formula formula::make_not(formula f) {
  return formula_access::build(op::kNot, std::move(f.n_), nullptr);
}

formula formula::make_and(formula a, formula b) {
  return formula_access::build(op::kAnd, std::move(a.n_), std::move(b.n_));
}

formula formula::make_or(formula a, formula b) {
  return formula_access::build(op::kOr, std::move(a.n_), std::move(b.n_));
}

formula formula::make_next(formula f) {
  return formula_access::build(op::kNext, std::move(f.n_), nullptr);
}

formula formula::make_always(formula f) {
  return formula_access::build(op::kAlways, std::move(f.n_), nullptr);
}

formula formula::make_eventually(formula f) {
  return formula_access::build(op::kEventually, std::move(f.n_), nullptr);
}

formula formula::make_after(formula lhs, formula rhs) {
  if (!lhs.is_state_formula()) {
    throw error{error_code::kUnsupportedProgression,
                "the trigger of AFTER must not contain temporal operators"};
  }
  return formula_access::build(op::kAfter, std::move(lhs.n_),
                               std::move(rhs.n_));
}

op formula::get_op() const { return n_->op_; }
atom const& formula::get_atom() const { return n_->atom_; }
formula formula::lhs() const { return formula{n_->lhs_}; }
formula formula::rhs() const { return formula{n_->rhs_}; }
std::size_t formula::hash() const { return n_->hash_; }
bool formula::is_state_formula() const { return n_->state_formula_; }
std::size_t formula::depth() const { return n_->depth_; }
std::size_t formula::size() const { return n_->size_; }

bool operator==(formula const& a, formula const& b) {
  return equal_nodes(a.n_.get(), b.n_.get());
}

std::strong_ordering operator<=>(formula const& a, formula const& b) {
  auto const c = compare_nodes(a.n_.get(), b.n_.get());
  return c < 0 ? std::strong_ordering::less
               : (c > 0 ? std::strong_ordering::greater
                        : std::strong_ordering::equal);
}

namespace {

std::string number_str(double const v) {
  char buf[64];
  auto const [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string{buf, ptr};
}

std::string print_atom(atom const& a) {
  if (auto const* m = std::get_if<mode_is>(&a)) {
    return fmt::format("mode={}", geodata::to_str(m->mode_));
  }
  auto const& c = std::get<var_cmp>(a);
  auto lhs = std::string{};
  switch (c.var_.kind_) {
    case var_kind::kTime:
      lhs = fmt::format("time({})", geodata::to_str(c.var_.mode_));
      break;
    case var_kind::kFare:
      lhs = fmt::format("fare({})", geodata::to_str(c.var_.mode_));
      break;
    case var_kind::kAux:
      lhs = fmt::format("aux({},{})", c.var_.dataset_, to_str(c.var_.agg_));
      break;
    case var_kind::kAuxHere:
      lhs = fmt::format("aux_here({})", c.var_.dataset_);
      break;
    case var_kind::kClock: lhs = "clock"; break;
  }
  return fmt::format("{} {} {}", lhs, to_str(c.op_), number_str(c.bound_));
}

// Binding strength: AFTER < | < & < prefix operators < atoms.
int precedence(op const o) {
  switch (o) {
    case op::kAfter: return 1;
    case op::kOr: return 2;
    case op::kAnd: return 3;
    case op::kNot:
    case op::kNext:
    case op::kAlways:
    case op::kEventually: return 4;
    default: return 5;
  }
}

void print_rec(formula const& f, int const ctx, std::string& out) {
  auto const o = f.get_op();
  auto const paren = precedence(o) < ctx;
  if (paren) {
    out += '(';
  }
  auto const unary = [&](char const* sym) {
    out += sym;
    out += '(';
    print_rec(f.lhs(), 0, out);
    out += ')';
  };
  switch (o) {
    case op::kTrue: out += "true"; break;
    case op::kFalse: out += "false"; break;
    case op::kAtom: out += print_atom(f.get_atom()); break;
    case op::kNot: unary("!"); break;
    case op::kNext: unary("X"); break;
    case op::kAlways: unary("G"); break;
    case op::kEventually: unary("F"); break;
    case op::kAnd:
      print_rec(f.lhs(), 3, out);
      out += " & ";
      print_rec(f.rhs(), 4, out);
      break;
    case op::kOr:
      print_rec(f.lhs(), 2, out);
      out += " | ";
      print_rec(f.rhs(), 3, out);
      break;
    case op::kAfter:
      print_rec(f.lhs(), 4, out);
      out += " AFTER ";
      print_rec(f.rhs(), 4, out);
      break;
  }
  if (paren) {
    out += ')';
  }
}

}  // namespace

std::string print(formula const& f) {
  auto out = std::string{};
  print_rec(f, 0, out);
  return out;
}

}  // namespace tripplan::ltl

namespace tripplan::ltl {

std::vector<std::string> datasets_of(formula const& f) {
  auto out = std::vector<std::string>{};
  auto const walk = [&](auto&& self, formula const& x) -> void {
    switch (x.get_op()) {
      case op::kTrue:
      case op::kFalse: return;
      case op::kAtom:
        if (auto const* c = std::get_if<var_cmp>(&x.get_atom());
            c != nullptr && (c->var_.kind_ == var_kind::kAux ||
                             c->var_.kind_ == var_kind::kAuxHere)) {
          out.push_back(c->var_.dataset_);
        }
        return;
      case op::kNot:
      case op::kNext:
      case op::kAlways:
      case op::kEventually: self(self, x.lhs()); return;
      case op::kAnd:
      case op::kOr:
      case op::kAfter:
        self(self, x.lhs());
        self(self, x.rhs());
        return;
    }
  };
  walk(walk, f);
  std::sort(begin(out), end(out));
  out.erase(std::unique(begin(out), end(out)), end(out));
  return out;
}

}  // namespace tripplan::ltl
