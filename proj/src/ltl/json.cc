#include "tripplan/ltl/parse.h"

#include "fmt/core.h"
#include "nlohmann/json.hpp"

#include "tripplan/error.h"

using json = nlohmann::json;

namespace tripplan::ltl {

namespace {

[[noreturn]] void bad(std::string const& what) {
  throw error{error_code::kSyntaxError, "constraint AST: " + what};
}

mode mode_from(json const& j) {
  auto const s = j.get<std::string>();
  auto const m = geodata::parse_mode(s);
  if (!m.has_value()) {
    throw error{error_code::kUnknownMode, fmt::format("unknown mode '{}'", s)};
  }
  return *m;
}

cmp_op cmp_from(std::string_view const s) {
  for (auto const o :
       {cmp_op::kLt, cmp_op::kLe, cmp_op::kEq, cmp_op::kGe, cmp_op::kGt}) {
    if (to_str(o) == s) {
      return o;
    }
  }
  bad(fmt::format("unknown comparison '{}'", s));
}

aux_agg agg_from(std::string_view const s) {
  for (auto const a : {aux_agg::kSum, aux_agg::kMax, aux_agg::kMin,
                       aux_agg::kAvg}) {
    if (to_str(a) == s) {
      return a;
    }
  }
  throw error{error_code::kUnknownVariable,
              fmt::format("unknown aggregate '{}'", s)};
}

json atom_json(atom const& a) {
  if (auto const* m = std::get_if<mode_is>(&a)) {
    return {{"op", "mode"}, {"mode", geodata::to_str(m->mode_)}};
  }
  auto const& c = std::get<var_cmp>(a);
  auto j = json{{"op", "cmp"}, {"cmp", to_str(c.op_)}, {"value", c.bound_}};
  switch (c.var_.kind_) {
    case var_kind::kTime:
      j["var"] = "time";
      j["mode"] = geodata::to_str(c.var_.mode_);
      break;
    case var_kind::kFare:
      j["var"] = "fare";
      j["mode"] = geodata::to_str(c.var_.mode_);
      break;
    case var_kind::kAux:
      j["var"] = "aux";
      j["dataset"] = c.var_.dataset_;
      j["agg"] = to_str(c.var_.agg_);
      break;
    case var_kind::kAuxHere:
      j["var"] = "aux_here";
      j["dataset"] = c.var_.dataset_;
      break;
    case var_kind::kClock: j["var"] = "clock"; break;
  }
  return j;
}

}  // namespace

json to_json(formula const& f) {
  switch (f.get_op()) {
    case op::kTrue:
    case op::kFalse: return {{"op", to_str(f.get_op())}};
    case op::kAtom: return atom_json(f.get_atom());
    case op::kNot:
    case op::kNext:
    case op::kAlways:
    case op::kEventually:
      return {{"op", to_str(f.get_op())}, {"arg", to_json(f.lhs())}};
    case op::kAnd:
    case op::kOr:
    case op::kAfter:
      return {{"op", to_str(f.get_op())},
              {"lhs", to_json(f.lhs())},
              {"rhs", to_json(f.rhs())}};
  }
  return {};
}

formula from_json(json const& j) {
  try {
    auto const o = j.at("op").get<std::string>();
    if (o == "true" || o == "false") {
      return formula::constant(o == "true");
    }
    if (o == "mode") {
      return formula::make_atom(mode_is{mode_from(j.at("mode"))});
    }
    if (o == "cmp") {
      auto c = var_cmp{};
      auto const var = j.at("var").get<std::string>();
      if (var == "time" || var == "fare") {
        c.var_.kind_ = var == "time" ? var_kind::kTime : var_kind::kFare;
        c.var_.mode_ = mode_from(j.at("mode"));
      } else if (var == "aux") {
        c.var_.kind_ = var_kind::kAux;
        c.var_.dataset_ = j.at("dataset").get<std::string>();
        c.var_.agg_ = agg_from(j.at("agg").get<std::string>());
      } else if (var == "aux_here") {
        c.var_.kind_ = var_kind::kAuxHere;
        c.var_.dataset_ = j.at("dataset").get<std::string>();
      } else if (var == "clock") {
        c.var_.kind_ = var_kind::kClock;
      } else {
        throw error{error_code::kUnknownVariable,
                    fmt::format("unknown variable '{}'", var)};
      }
      c.op_ = cmp_from(j.at("cmp").get<std::string>());
      c.bound_ = j.at("value").get<double>();
      return formula::make_atom(std::move(c));
    }
    if (o == "not") return formula::make_not(from_json(j.at("arg")));
    if (o == "next") return formula::make_next(from_json(j.at("arg")));
    if (o == "always") return formula::make_always(from_json(j.at("arg")));
    if (o == "eventually") {
      return formula::make_eventually(from_json(j.at("arg")));
    }
    if (o == "and") {
      return formula::make_and(from_json(j.at("lhs")), from_json(j.at("rhs")));
    }
    if (o == "or") {
      return formula::make_or(from_json(j.at("lhs")), from_json(j.at("rhs")));
    }
    if (o == "after") {
      return formula::make_after(from_json(j.at("lhs")),
                                 from_json(j.at("rhs")));
    }
    bad(fmt::format("unknown op '{}'", o));
  } catch (json::exception const& e) {
    bad(e.what());
  }
}

}  // namespace tripplan::ltl
