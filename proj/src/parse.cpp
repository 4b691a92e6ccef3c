//===- parse.cpp - Expression and rule-file parsing -----------------------===//
//
// Part of the termcanon project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "canon/parse.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <map>
#include <set>

namespace canon {

namespace {

enum class Tok : uint8_t {
  End,
  Ident,
  Int,
  LParen,
  RParen,
  LBrace,
  RBrace,
  LBracket,
  RBracket,
  Question,
  Colon,
  Comma,
  Semicolon,
  Plus,
  Minus,
  Star,
  Amp,
  Pipe,
  Caret,
  Tilde,
  Bang,
  Lt,
  Shl,
  Shr,
  Ushr,
  EqEq,
  AmpAmp,
  PipePipe,
  MapsTo, // |->
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  uint64_t number = 0;
  size_t line = 1, col = 1;
};

class Lexer {
public:
  explicit Lexer(const std::string &src) : src_(src) { advance(); }

  const Token &peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

  [[noreturn]] void fail(const std::string &msg) const {
    throw ParseError(msg, tok_.line, tok_.col);
  }

private:
  void advance() {
    skip_ws_and_comments();
    tok_ = Token{};
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= src_.size()) {
      tok_.kind = Tok::End;
      return;
    }
    char c = src_[pos_];
    if (std::isalpha((unsigned char)c) || c == '_') {
      size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum((unsigned char)src_[pos_]) || src_[pos_] == '_'))
        bump();
      tok_.kind = Tok::Ident;
      tok_.text = src_.substr(start, pos_ - start);
      return;
    }
    if (std::isdigit((unsigned char)c)) {
      size_t start = pos_;
      while (pos_ < src_.size() && std::isdigit((unsigned char)src_[pos_]))
        bump();
      tok_.kind = Tok::Int;
      tok_.text = src_.substr(start, pos_ - start);
      tok_.number = std::strtoull(tok_.text.c_str(), nullptr, 10);
      return;
    }
    auto two = [this](char a, char b) {
      return pos_ + 1 < src_.size() && src_[pos_] == a && src_[pos_ + 1] == b;
    };
    switch (c) {
    case '(':
      one(Tok::LParen);
      return;
    case ')':
      one(Tok::RParen);
      return;
    case '{':
      one(Tok::LBrace);
      return;
    case '}':
      one(Tok::RBrace);
      return;
    case '[':
      one(Tok::LBracket);
      return;
    case ']':
      one(Tok::RBracket);
      return;
    case '?':
      one(Tok::Question);
      return;
    case ':':
      one(Tok::Colon);
      return;
    case ',':
      one(Tok::Comma);
      return;
    case ';':
      one(Tok::Semicolon);
      return;
    case '+':
      one(Tok::Plus);
      return;
    case '-':
      one(Tok::Minus);
      return;
    case '*':
      one(Tok::Star);
      return;
    case '^':
      one(Tok::Caret);
      return;
    case '~':
      one(Tok::Tilde);
      return;
    case '!':
      one(Tok::Bang);
      return;
    case '&':
      if (two('&', '&')) {
        bump();
        one(Tok::AmpAmp);
      } else
        one(Tok::Amp);
      return;
    case '|':
      if (two('|', '-') && pos_ + 2 < src_.size() && src_[pos_ + 2] == '>') {
        bump();
        bump();
        one(Tok::MapsTo);
      } else if (two('|', '|')) {
        bump();
        one(Tok::PipePipe);
      } else
        one(Tok::Pipe);
      return;
    case '<':
      if (two('<', '<')) {
        bump();
        one(Tok::Shl);
      } else
        one(Tok::Lt);
      return;
    case '>':
      if (two('>', '>')) {
        bump();
        if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
          bump();
          one(Tok::Ushr);
        } else
          one(Tok::Shr);
      } else
        throw ParseError("unexpected '>'", line_, col_);
      return;
    case '=':
      if (two('=', '=')) {
        bump();
        one(Tok::EqEq);
      } else
        throw ParseError("unexpected '='", line_, col_);
      return;
    default:
      throw ParseError(std::string("unexpected character '") + c + "'", line_,
                       col_);
    }
  }

  void one(Tok k) {
    tok_.kind = k;
    bump();
  }

  void skip_ws_and_comments() {
    for (;;) {
      while (pos_ < src_.size() &&
             std::isspace((unsigned char)src_[pos_]))
        bump();
      if (pos_ + 1 < src_.size() && src_[pos_] == '/' && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n')
          bump();
        continue;
      }
      break;
    }
  }

  void bump() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string &src_;
  size_t pos_ = 0;
  size_t line_ = 1, col_ = 1;
  Token tok_;
};

bool is_param_name(const std::string &s) {
  if (s.size() < 2 || s[0] != 'p')
    return false;
  return std::all_of(s.begin() + 1, s.end(),
                     [](char c) { return std::isdigit((unsigned char)c); });
}

bool is_width_name(const std::string &s) {
  if (s.size() < 2 || s[0] != 'i')
    return false;
  return std::all_of(s.begin() + 1, s.end(),
                     [](char c) { return std::isdigit((unsigned char)c); });
}

class Parser {
public:
  Parser(const std::string &src, bool pattern_mode)
      : lex_(src), pattern_mode_(pattern_mode) {}

  Lexer &lexer() { return lex_; }

  Token expect(Tok k, const char *what) {
    if (lex_.peek().kind != k)
      lex_.fail(std::string("expected ") + what);
    return lex_.take();
  }

  bool accept(Tok k) {
    if (lex_.peek().kind != k)
      return false;
    lex_.take();
    return true;
  }

  bool accept_ident(const char *word) {
    if (lex_.peek().kind != Tok::Ident || lex_.peek().text != word)
      return false;
    lex_.take();
    return true;
  }

  int64_t parse_signed_int() {
    bool neg = accept(Tok::Minus);
    Token t = expect(Tok::Int, "an integer");
    if (t.number > (uint64_t)INT64_MAX + (neg ? 1 : 0))
      throw ParseError("integer out of range", t.line, t.col);
    if (neg)
      return t.number == (uint64_t{1} << 63) ? INT64_MIN
                                             : -(int64_t)t.number;
    return (int64_t)t.number;
  }

  unsigned parse_width(const Token &t) {
    if (!is_width_name(t.text))
      throw ParseError("expected a width like i32", t.line, t.col);
    unsigned w = (unsigned)std::strtoul(t.text.c_str() + 1, nullptr, 10);
    if (w < 1 || w > 64)
      throw ParseError("width must be in 1..64", t.line, t.col);
    return w;
  }

  Stamp parse_stamp_tokens() {
    Token t = expect(Tok::Ident, "a stamp like i32 or i8[0,5]");
    unsigned w = parse_width(t);
    if (!accept(Tok::LBracket))
      return Stamp::integer_full(w);
    int64_t lo = parse_signed_int();
    expect(Tok::Comma, "','");
    int64_t hi = parse_signed_int();
    Token close = expect(Tok::RBracket, "']'");
    if (lo > hi || lo < min_signed(w) || hi > max_signed(w))
      throw ParseError("stamp bounds out of range for i" + std::to_string(w),
                       close.line, close.col);
    return Stamp::integer(w, lo, hi);
  }

  Value parse_value_literal() {
    Token t = expect(Tok::Ident, "a width like i32");
    unsigned w = parse_width(t);
    bool neg = accept(Tok::Minus);
    Token n = expect(Tok::Int, "an integer");
    if (neg) {
      if (n.number > (uint64_t)max_signed(64) + 1)
        throw ParseError("constant out of range", n.line, n.col);
      int64_t x = n.number == (uint64_t{1} << 63) ? INT64_MIN
                                                  : -(int64_t)n.number;
      if (x < min_signed(w))
        throw ParseError("constant out of range for i" + std::to_string(w),
                         n.line, n.col);
      return Value::of_signed(w, x);
    }
    // Non-negative literals may use the unsigned range of the width.
    if (w < 64 && n.number > mask_bits(w, ~uint64_t{0}))
      throw ParseError("constant out of range for i" + std::to_string(w),
                       n.line, n.col);
    return Value::of(w, n.number);
  }

  // Precedence-climbing expression grammar.
  TermPtr parse_expression() { return parse_ternary(); }

  TermPtr parse_ternary() {
    TermPtr c = parse_or();
    if (!accept(Tok::Question))
      return c;
    TermPtr t = parse_ternary();
    expect(Tok::Colon, "':'");
    TermPtr f = parse_ternary();
    return Term::conditional(std::move(c), std::move(t), std::move(f));
  }

  TermPtr parse_or() {
    TermPtr l = parse_xor();
    while (accept(Tok::Pipe))
      l = Term::binary(BinaryOp::Or, std::move(l), parse_xor());
    return l;
  }

  TermPtr parse_xor() {
    TermPtr l = parse_and();
    while (accept(Tok::Caret))
      l = Term::binary(BinaryOp::Xor, std::move(l), parse_and());
    return l;
  }

  TermPtr parse_and() {
    TermPtr l = parse_equality();
    while (accept(Tok::Amp))
      l = Term::binary(BinaryOp::And, std::move(l), parse_equality());
    return l;
  }

  TermPtr parse_equality() {
    TermPtr l = parse_relational();
    while (accept(Tok::EqEq))
      l = Term::binary(BinaryOp::IntegerEquals, std::move(l),
                       parse_relational());
    return l;
  }

  TermPtr parse_relational() {
    TermPtr l = parse_shift();
    while (accept(Tok::Lt))
      l = Term::binary(BinaryOp::IntegerLessThan, std::move(l), parse_shift());
    return l;
  }

  TermPtr parse_shift() {
    TermPtr l = parse_additive();
    for (;;) {
      if (accept(Tok::Shl))
        l = Term::binary(BinaryOp::LeftShift, std::move(l), parse_additive());
      else if (accept(Tok::Shr))
        l = Term::binary(BinaryOp::RightShiftSigned, std::move(l),
                         parse_additive());
      else if (accept(Tok::Ushr))
        l = Term::binary(BinaryOp::RightShiftUnsigned, std::move(l),
                         parse_additive());
      else
        return l;
    }
  }

  TermPtr parse_additive() {
    TermPtr l = parse_multiplicative();
    for (;;) {
      if (accept(Tok::Plus))
        l = Term::binary(BinaryOp::Add, std::move(l), parse_multiplicative());
      else if (accept(Tok::Minus))
        l = Term::binary(BinaryOp::Sub, std::move(l), parse_multiplicative());
      else
        return l;
    }
  }

  TermPtr parse_multiplicative() {
    TermPtr l = parse_unary();
    while (accept(Tok::Star))
      l = Term::binary(BinaryOp::Mul, std::move(l), parse_unary());
    return l;
  }

  TermPtr parse_unary() {
    if (accept(Tok::Minus))
      return Term::unary(UnaryOp::Neg, parse_unary());
    if (accept(Tok::Tilde))
      return Term::unary(UnaryOp::Not, parse_unary());
    if (accept(Tok::Bang))
      return Term::unary(UnaryOp::LogicNegate, parse_unary());
    return parse_primary();
  }

  TermPtr parse_primary() {
    const Token &t = lex_.peek();
    switch (t.kind) {
    case Tok::LParen: {
      lex_.take();
      TermPtr e = parse_expression();
      expect(Tok::RParen, "')'");
      return e;
    }
    case Tok::Int:
      throw ParseError("integer literals are written `const i<width> <n>`",
                       t.line, t.col);
    case Tok::Ident:
      break;
    default:
      lex_.fail("expected an expression");
    }

    Token id = lex_.take();
    const std::string &w = id.text;

    if (w == "true")
      return Term::constant(Value::bool32(true));
    if (w == "false")
      return Term::constant(Value::bool32(false));

    if (w == "const") {
      if (lex_.peek().kind == Tok::Ident && is_width_name(lex_.peek().text))
        return Term::constant(parse_value_literal());
      if (!pattern_mode_)
        throw ParseError("expected `const i<width> <n>`", id.line, id.col);
      Token name = expect(Tok::Ident, "a metavariable name");
      return Term::const_metavar(name.text);
    }

    if (w == "leaf") {
      Token n = expect(Tok::Int, "a node id");
      expect(Tok::Colon, "':' and a stamp");
      Stamp s = parse_stamp_tokens();
      if (n.number > UINT32_MAX)
        throw ParseError("node id out of range", n.line, n.col);
      return Term::leaf((uint32_t)n.number, s);
    }

    if (w == "zero_like") {
      if (!pattern_mode_)
        throw ParseError("zero_like is only valid in rewrite templates",
                         id.line, id.col);
      expect(Tok::LParen, "'('");
      Token name = expect(Tok::Ident, "a metavariable name");
      expect(Tok::RParen, "')'");
      return Term::zero_like(name.text);
    }

    if (w == "abs") {
      expect(Tok::LParen, "'('");
      TermPtr e = parse_expression();
      expect(Tok::RParen, "')'");
      return Term::unary(UnaryOp::Abs, std::move(e));
    }

    if (is_param_name(w)) {
      if (lex_.peek().kind != Tok::Colon)
        throw ParseError("parameter '" + w + "' needs a stamp, e.g. " + w +
                             ":i32",
                         id.line, id.col);
      lex_.take();
      Stamp s = parse_stamp_tokens();
      unsigned long idx = std::strtoul(w.c_str() + 1, nullptr, 10);
      if (idx > UINT32_MAX)
        throw ParseError("parameter index out of range", id.line, id.col);
      return Term::parameter((uint32_t)idx, s);
    }

    if (!pattern_mode_)
      throw ParseError("unknown identifier '" + w +
                           "' (parameters are written p<i>:<stamp>)",
                       id.line, id.col);
    return Term::metavar(w);
  }

  // Condition grammar.
  ConditionPtr parse_condition() { return parse_cond_or(); }

  ConditionPtr parse_cond_or() {
    ConditionPtr l = parse_cond_and();
    while (accept(Tok::PipePipe))
      l = Condition::disj(std::move(l), parse_cond_and());
    return l;
  }

  ConditionPtr parse_cond_and() {
    ConditionPtr l = parse_cond_not();
    while (accept(Tok::AmpAmp))
      l = Condition::conj(std::move(l), parse_cond_not());
    return l;
  }

  ConditionPtr parse_cond_not() {
    if (accept(Tok::Bang))
      return Condition::negate(parse_cond_not());
    return parse_cond_atom();
  }

  ConditionPtr parse_cond_atom() {
    if (accept(Tok::LParen)) {
      ConditionPtr c = parse_condition();
      expect(Tok::RParen, "')'");
      return c;
    }
    Token id = expect(Tok::Ident, "a condition atom");
    if (id.text == "true")
      return Condition::truth();
    if (id.text == "IsConstant") {
      expect(Tok::LParen, "'('");
      Token v = expect(Tok::Ident, "a metavariable name");
      expect(Tok::RParen, "')'");
      return Condition::is_constant(v.text);
    }
    if (id.text == "StampUnder" || id.text == "WidthEq") {
      bool under = id.text == "StampUnder";
      expect(Tok::LParen, "'('");
      Token a = expect(Tok::Ident, "a metavariable name");
      expect(Tok::Comma, "','");
      Token b = expect(Tok::Ident, "a metavariable name");
      expect(Tok::RParen, "')'");
      return under ? Condition::stamp_under_cond(a.text, b.text)
                   : Condition::width_eq(a.text, b.text);
    }
    // `v == const i<w> n`
    expect(Tok::EqEq, "'=='");
    Token kw = expect(Tok::Ident, "`const`");
    if (kw.text != "const")
      throw ParseError("expected `const i<width> <n>`", kw.line, kw.col);
    Value v = parse_value_literal();
    return Condition::const_eq(id.text, v);
  }

private:
  Lexer lex_;
  bool pattern_mode_;
};

void collect_kinds(const Term &t,
                   std::map<std::string, TermKind> &kinds,
                   const Token &at) {
  if (t.kind() == TermKind::MetaVar || t.kind() == TermKind::ConstMetaVar) {
    auto [it, inserted] = kinds.emplace(t.var_name(), t.kind());
    if (!inserted && it->second != t.kind())
      throw ParseError("metavariable '" + t.var_name() +
                           "' is used both as `const` and as a plain variable",
                       at.line, at.col);
  }
  for (const auto &c : t.children())
    collect_kinds(*c, kinds, at);
}

bool contains_zero_like(const Term &t) {
  if (t.kind() == TermKind::ZeroLike)
    return true;
  return std::any_of(t.children().begin(), t.children().end(),
                     [](const TermPtr &c) { return contains_zero_like(*c); });
}

// Shared by parse_rule_body and the rule-file parser; `at` is the token
// to blame in diagnostics.
void validate_rule(const RewriteRule &rule, const Token &at) {
  if (contains_zero_like(*rule.lhs))
    throw ParseError("zero_like may appear only on the right side", at.line,
                     at.col);

  std::vector<std::string> lhs_vars = collect_vars(*rule.lhs);
  auto bound = [&lhs_vars](const std::string &v) {
    return std::find(lhs_vars.begin(), lhs_vars.end(), v) != lhs_vars.end();
  };
  for (const auto &v : collect_vars(*rule.rhs))
    if (!bound(v))
      throw ParseError("variable '" + v +
                           "' on the right side is not bound by the pattern",
                       at.line, at.col);
  std::vector<std::string> cond_vars;
  if (rule.cond)
    rule.cond->collect_vars(cond_vars);
  for (const auto &v : cond_vars)
    if (!bound(v))
      throw ParseError("condition variable '" + v +
                           "' is not bound by the pattern",
                       at.line, at.col);

  std::map<std::string, TermKind> kinds;
  collect_kinds(*rule.lhs, kinds, at);
  collect_kinds(*rule.rhs, kinds, at);
}

RewriteRule parse_rule_tail(Parser &p, std::string name, const Token &at) {
  RewriteRule rule;
  rule.name = std::move(name);
  rule.lhs = p.parse_expression();
  p.expect(Tok::MapsTo, "'|->'");
  rule.rhs = p.parse_expression();
  if (p.accept_ident("when"))
    rule.cond = p.parse_condition();
  else
    rule.cond = Condition::truth();
  validate_rule(rule, at);
  return rule;
}

} // namespace

TermPtr parse_expr(const std::string &text) {
  Parser p(text, /*pattern_mode=*/false);
  TermPtr e = p.parse_expression();
  if (p.lexer().peek().kind != Tok::End)
    p.lexer().fail("trailing input after expression");
  return e;
}

TermPtr parse_pattern(const std::string &text) {
  Parser p(text, /*pattern_mode=*/true);
  TermPtr e = p.parse_expression();
  if (p.lexer().peek().kind != Tok::End)
    p.lexer().fail("trailing input after pattern");
  return e;
}

Stamp parse_stamp(const std::string &text) {
  Parser p(text, false);
  Stamp s = p.parse_stamp_tokens();
  if (p.lexer().peek().kind != Tok::End)
    p.lexer().fail("trailing input after stamp");
  return s;
}

Value parse_value(const std::string &text) {
  Parser p(text, false);
  Value v = p.parse_value_literal();
  if (p.lexer().peek().kind != Tok::End)
    p.lexer().fail("trailing input after value");
  return v;
}

RewriteRule parse_rule_body(const std::string &text) {
  Parser p(text, /*pattern_mode=*/true);
  Token at = p.lexer().peek();
  RewriteRule r = parse_rule_tail(p, "", at);
  if (p.lexer().peek().kind != Tok::End)
    p.lexer().fail("trailing input after rule");
  return r;
}

ParsedRules parse_rules(const std::string &text) {
  ParsedRules out;
  Parser p(text, /*pattern_mode=*/true);

  while (p.lexer().peek().kind != Tok::End) {
    Token kw = p.expect(Tok::Ident, "`phase`");
    if (kw.text != "phase")
      throw ParseError("expected `phase`", kw.line, kw.col);
    Phase phase;
    Token name = p.expect(Tok::Ident, "a phase name");
    phase.name = name.text;
    if (p.accept_ident("measure")) {
      Token m = p.expect(Tok::Ident, "a measure name");
      phase.measure = m.text;
    }
    p.expect(Tok::LBrace, "'{'");

    std::set<std::string> used_names;
    while (!p.accept(Tok::RBrace)) {
      bool unchecked = p.accept_ident("unchecked");
      Token rn = p.expect(Tok::Ident, "a rule name");
      p.expect(Tok::Colon, "':'");
      RewriteRule rule = parse_rule_tail(p, rn.text, rn);
      rule.unchecked = unchecked;
      p.expect(Tok::Semicolon, "';'");

      if (used_names.count(rule.name)) {
        std::string base = rule.name;
        int suffix = 2;
        while (used_names.count(base + "_" + std::to_string(suffix)))
          ++suffix;
        rule.name = base + "_" + std::to_string(suffix);
        out.warnings.push_back("phase " + phase.name + ": duplicate rule name '" +
                               base + "' at line " + std::to_string(rn.line) +
                               " renamed to '" + rule.name + "'");
      }
      used_names.insert(rule.name);
      phase.rules.push_back(std::move(rule));
    }
    out.phases.push_back(std::move(phase));
  }
  return out;
}

} // namespace canon
