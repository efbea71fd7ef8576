#pragma once

#include <string_view>

#include "nlohmann/json_fwd.hpp"

#include "tripplan/ltl/formula.h"

namespace tripplan::ltl {

// Constraint text, e.g. "F(time(bike) >= 3600) & G(time(bike) <= 7200)".
//
//   formula := or ["AFTER" formula]          (right associative)
//   or      := and {"|" and}
//   and     := unary {"&" unary}
//   unary   := ("!" | "X" | "G" | "F") unary | primary
//   primary := "(" formula ")" | "true" | "false" | atom
//   atom    := "mode" "=" MODE
//            | "time" "(" MODE ")" CMP INT
//            | "fare" "(" MODE ")" CMP DECIMAL
//            | "aux" "(" NAME "," ("sum"|"max"|"min"|"avg") ")" CMP NUMBER
//            | "aux_here" "(" NAME ")" CMP NUMBER
//            | "clock" CMP INT
//   CMP     := "<" | "<=" | "=" | ">=" | ">"
//
// Throws error{kSyntaxError | kUnknownVariable | kUnknownMode |
// kUnsupportedProgression} carrying the character offset.
formula parse(std::string_view);

// JSON mirror of the AST for programmatic clients.
nlohmann::json to_json(formula const&);
formula from_json(nlohmann::json const&);

}  // namespace tripplan::ltl
