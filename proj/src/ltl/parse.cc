#include "tripplan/ltl/parse.h"

#include <cctype>
#include <charconv>
#include <cmath>
#include <string>
#include <vector>

#include "fmt/core.h"

#include "tripplan/error.h"

namespace tripplan::ltl {

namespace {

enum class tok : std::uint8_t {
  kEnd,
  kIdent,
  kNumber,
  kLParen,
  kRParen,
  kComma,
  kNot,
  kAnd,
  kOr,
  kLt,
  kLe,
  kEq,
  kGe,
  kGt
};

struct token {
  tok type_{tok::kEnd};
  std::string_view text_;
  std::size_t pos_{0U};
};

std::vector<token> tokenize(std::string_view const s) {
  auto tokens = std::vector<token>{};
  auto i = std::size_t{0U};
  auto const is_ident_start = [](char const c) {
    return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_';
  };
  auto const is_ident = [&](char const c) {
    return is_ident_start(c) || std::isdigit(static_cast<unsigned char>(c)) != 0;
  };
  while (i < s.size()) {
    auto const c = s[i];
    if (std::isspace(static_cast<unsigned char>(c)) != 0) {
      ++i;
      continue;
    }
    auto const start = i;
    auto const single = [&](tok const t) {
      tokens.push_back({t, s.substr(start, 1U), start});
      ++i;
    };
    if (is_ident_start(c)) {
      while (i < s.size() && is_ident(s[i])) {
        ++i;
      }
      tokens.push_back({tok::kIdent, s.substr(start, i - start), start});
    } else if (std::isdigit(static_cast<unsigned char>(c)) != 0 ||
               c == '.' || c == '-') {
      ++i;
      while (i < s.size() &&
             (std::isdigit(static_cast<unsigned char>(s[i])) != 0 ||
              s[i] == '.' || s[i] == 'e' || s[i] == 'E' ||
              ((s[i] == '-' || s[i] == '+') &&
               (s[i - 1] == 'e' || s[i - 1] == 'E')))) {
        ++i;
      }
      tokens.push_back({tok::kNumber, s.substr(start, i - start), start});
    } else if (c == '(') {
      single(tok::kLParen);
    } else if (c == ')') {
      single(tok::kRParen);
    } else if (c == ',') {
      single(tok::kComma);
    } else if (c == '!') {
      single(tok::kNot);
    } else if (c == '&') {
      single(tok::kAnd);
    } else if (c == '|') {
      single(tok::kOr);
    } else if (c == '=') {
      single(tok::kEq);
    } else if (c == '<' || c == '>') {
      auto const with_eq = i + 1U < s.size() && s[i + 1U] == '=';
      auto const t = c == '<' ? (with_eq ? tok::kLe : tok::kLt)
                              : (with_eq ? tok::kGe : tok::kGt);
      tokens.push_back({t, s.substr(start, with_eq ? 2U : 1U), start});
      i += with_eq ? 2U : 1U;
    } else {
      throw error{error_code::kSyntaxError,
                  fmt::format("unexpected character '{}' at {}", c, start),
                  start};
    }
  }
  tokens.push_back({tok::kEnd, {}, s.size()});
  return tokens;
}

struct parser {
  formula parse_formula() {
    auto lhs = parse_or();
    if (is_keyword("AFTER")) {
      auto const pos = peek().pos_;
      next();
      auto rhs = parse_formula();
      if (!lhs.is_state_formula()) {
        throw error{error_code::kUnsupportedProgression,
                    fmt::format("the trigger of AFTER at {} must not contain "
                                "temporal operators",
                                pos),
                    pos};
      }
      return formula::make_after(std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  formula parse_or() {
    auto f = parse_and();
    while (peek().type_ == tok::kOr) {
      next();
      f = formula::make_or(std::move(f), parse_and());
    }
    return f;
  }

  formula parse_and() {
    auto f = parse_unary();
    while (peek().type_ == tok::kAnd) {
      next();
      f = formula::make_and(std::move(f), parse_unary());
    }
    return f;
  }

  formula parse_unary() {
    if (peek().type_ == tok::kNot) {
      next();
      return formula::make_not(parse_unary());
    }
    if (is_keyword("X")) {
      next();
      return formula::make_next(parse_unary());
    }
    if (is_keyword("G")) {
      next();
      return formula::make_always(parse_unary());
    }
    if (is_keyword("F")) {
      next();
      return formula::make_eventually(parse_unary());
    }
    return parse_primary();
  }

  formula parse_primary() {
    auto const& t = peek();
    if (t.type_ == tok::kLParen) {
      next();
      auto f = parse_formula();
      expect(tok::kRParen, "')'");
      return f;
    }
    if (t.type_ != tok::kIdent) {
      fail(t, "expected a formula");
    }
    if (t.text_ == "true" || t.text_ == "false") {
      next();
      return formula::constant(t.text_ == "true");
    }
    return formula::make_atom(parse_atom());
  }

  atom parse_atom() {
    auto const name = next();
    if (name.text_ == "mode") {
      expect(tok::kEq, "'='");
      return mode_is{parse_mode_name()};
    }

    auto v = state_var{};
    if (name.text_ == "time" || name.text_ == "fare") {
      v.kind_ = name.text_ == "time" ? var_kind::kTime : var_kind::kFare;
      expect(tok::kLParen, "'('");
      v.mode_ = parse_mode_name();
      expect(tok::kRParen, "')'");
    } else if (name.text_ == "aux") {
      v.kind_ = var_kind::kAux;
      expect(tok::kLParen, "'('");
      v.dataset_ = std::string{expect(tok::kIdent, "dataset name").text_};
      expect(tok::kComma, "','");
      auto const agg = expect(tok::kIdent, "aggregate");
      if (agg.text_ == "sum") {
        v.agg_ = aux_agg::kSum;
      } else if (agg.text_ == "max") {
        v.agg_ = aux_agg::kMax;
      } else if (agg.text_ == "min") {
        v.agg_ = aux_agg::kMin;
      } else if (agg.text_ == "avg") {
        v.agg_ = aux_agg::kAvg;
      } else {
        throw error{error_code::kUnknownVariable,
                    fmt::format("unknown aggregate '{}' at {}", agg.text_,
                                agg.pos_),
                    agg.pos_};
      }
      expect(tok::kRParen, "')'");
    } else if (name.text_ == "aux_here") {
      v.kind_ = var_kind::kAuxHere;
      expect(tok::kLParen, "'('");
      v.dataset_ = std::string{expect(tok::kIdent, "dataset name").text_};
      expect(tok::kRParen, "')'");
    } else if (name.text_ == "clock") {
      v.kind_ = var_kind::kClock;
    } else {
      throw error{error_code::kUnknownVariable,
                  fmt::format("unknown variable '{}' at {}", name.text_,
                              name.pos_),
                  name.pos_};
    }

    auto c = var_cmp{};
    c.var_ = std::move(v);
    auto const op_tok = next();
    switch (op_tok.type_) {
      case tok::kLt: c.op_ = cmp_op::kLt; break;
      case tok::kLe: c.op_ = cmp_op::kLe; break;
      case tok::kEq: c.op_ = cmp_op::kEq; break;
      case tok::kGe: c.op_ = cmp_op::kGe; break;
      case tok::kGt: c.op_ = cmp_op::kGt; break;
      default: fail(op_tok, "expected a comparison operator");
    }
    auto const num = expect(tok::kNumber, "a number");
    auto value = 0.0;
    auto const [ptr, ec] = std::from_chars(
        num.text_.data(), num.text_.data() + num.text_.size(), value);
    if (ec != std::errc{} || ptr != num.text_.data() + num.text_.size() ||
        !std::isfinite(value)) {
      fail(num, "malformed number");
    }
    auto const integral =
        c.var_.kind_ == var_kind::kTime || c.var_.kind_ == var_kind::kClock;
    if (integral && value != std::trunc(value)) {
      fail(num, "expected integer seconds");
    }
    c.bound_ = value;
    return c;
  }

  mode parse_mode_name() {
    auto const t = expect(tok::kIdent, "a mode");
    auto const m = geodata::parse_mode(t.text_);
    if (!m.has_value()) {
      throw error{error_code::kUnknownMode,
                  fmt::format("unknown mode '{}' at {}", t.text_, t.pos_),
                  t.pos_};
    }
    return *m;
  }

  bool is_keyword(std::string_view const kw) const {
    return peek().type_ == tok::kIdent && peek().text_ == kw;
  }

  token const& peek() const { return tokens_[pos_]; }

  token next() {
    auto const t = tokens_[pos_];
    if (t.type_ != tok::kEnd) {
      ++pos_;
    }
    return t;
  }

  token expect(tok const type, std::string_view const what) {
    if (peek().type_ != type) {
      fail(peek(), fmt::format("expected {}", what));
    }
    return next();
  }

  [[noreturn]] void fail(token const& t, std::string_view const what) const {
    throw error{error_code::kSyntaxError,
                fmt::format("{} at {}{}", what, t.pos_,
                            t.type_ == tok::kEnd
                                ? std::string{" (end of input)"}
                                : fmt::format(" near '{}'", t.text_)),
                t.pos_};
  }

  std::vector<token> tokens_;
  std::size_t pos_{0U};
};

}  // namespace

formula parse(std::string_view const text) {
  auto p = parser{tokenize(text), 0U};
  auto f = p.parse_formula();
  if (p.peek().type_ != tok::kEnd) {
    p.fail(p.peek(), "unexpected trailing input");
  }
  return f;
}

}  // namespace tripplan::ltl
