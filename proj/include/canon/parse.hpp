//===- parse.hpp - Expression and rule-file parsing -------------*- C++ -*-===//
//
// Part of the termcanon project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// Concrete syntax (Java precedence, `//` comments):
//
//   expressions   + - * & | ^ << >> >>> < ==  unary - ~ !  c ? t : f
//                 abs(e)   p0:i32   p1:i8[0,5]   leaf 7:i32   const i8 42
//                 true/false (the 0/1-valued 32-bit constants)
//   patterns      additionally: bare identifiers are metavariables,
//                 `const c` matches only constants, `zero_like(x)` (right
//                 sides only) makes a zero of x's width
//   rule files    phase <Name> [measure <id>] { <Rule>* }
//                 <Rule> ::= [unchecked] <Name> ':' pat '|->' pat
//                            ['when' cond] ';'
//                 cond atoms: IsConstant(v), StampUnder(u, v), WidthEq(u, v),
//                 v == const i<w> n, true; combined with && || !
//
//===----------------------------------------------------------------------===//

#ifndef CANON_PARSE_HPP
#define CANON_PARSE_HPP

#include "canon/rules.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace canon {

class ParseError : public std::runtime_error {
public:
  ParseError(std::string msg, size_t line, size_t col)
      : std::runtime_error(msg + " at " + std::to_string(line) + ":" +
                           std::to_string(col)),
        message(std::move(msg)), line(line), col(col) {}

  std::string message;
  size_t line;
  size_t col;
};

/// Ground expression; bare identifiers are rejected.
TermPtr parse_expr(const std::string &text);

/// Pattern; bare identifiers become metavariables.
TermPtr parse_pattern(const std::string &text);

/// `i<w>` or `i<w>[lo,hi]`.
Stamp parse_stamp(const std::string &text);

/// `i<w> <signed-decimal>`, e.g. `i8 -1`.
Value parse_value(const std::string &text);

/// Rule body without a name: `<lhs> |-> <rhs> [when <cond>]`.
/// Validates variable binding and consistent metavariable typing.
RewriteRule parse_rule_body(const std::string &text);

struct ParsedRules {
  std::vector<Phase> phases;
  std::vector<std::string> warnings; // duplicate names, etc.
};

/// Parse a rule file. Duplicate rule names within a phase are warned about
/// and auto-suffixed; unbound right-side or condition variables are hard
/// errors.
ParsedRules parse_rules(const std::string &text);

} // namespace canon

#endif // CANON_PARSE_HPP
