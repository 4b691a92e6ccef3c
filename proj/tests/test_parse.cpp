//===- test_parse.cpp - Expression and rule-file parser tests --------------===//
//
// Part of the termcanon project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "canon/parse.hpp"
#include "support/generators.hpp"

#include <doctest.h>

using namespace canon;

TEST_CASE("precedence follows Java") {
  TermPtr e = parse_expr("const i8 1 + const i8 2 * const i8 3");
  REQUIRE(e->kind() == TermKind::Binary);
  CHECK(e->binary_op() == BinaryOp::Add);
  CHECK(e->child(1)->binary_op() == BinaryOp::Mul);

  // Shifts bind looser than addition.
  TermPtr s = parse_expr("p0:i8 + p1:i8 << p0:i8");
  CHECK(s->binary_op() == BinaryOp::LeftShift);
  CHECK(s->child(0)->binary_op() == BinaryOp::Add);

  // Subtraction is left-associative.
  TermPtr d = parse_expr("p0:i8 - p1:i8 - p0:i8");
  CHECK(d->binary_op() == BinaryOp::Sub);
  CHECK(d->child(0)->binary_op() == BinaryOp::Sub);
  CHECK(d->child(1)->kind() == TermKind::Parameter);

  TermPtr t = parse_expr("p0:i32 < p1:i32 ? p0:i32 : p1:i32");
  CHECK(t->kind() == TermKind::Conditional);
  CHECK(t->child(0)->binary_op() == BinaryOp::IntegerLessThan);
}

TEST_CASE("primary forms") {
  CHECK(parse_expr("const i8 -1")->value() == Value::of(8, 255));
  CHECK(parse_expr("const i8 255")->value() == Value::of(8, 255));
  CHECK(parse_expr("true")->value() == Value::of(32, 1));
  CHECK(parse_expr("false")->value() == Value::of(32, 0));
  TermPtr p = parse_expr("p3:i8[0,5]");
  CHECK(p->index() == 3);
  CHECK(p->stamp() == Stamp::integer(8, 0, 5));
  TermPtr l = parse_expr("leaf 7:i16");
  CHECK(l->kind() == TermKind::Leaf);
  CHECK(l->index() == 7);
  CHECK(parse_expr("abs(p0:i8)")->unary_op() == UnaryOp::Abs);
  CHECK(parse_expr("~p0:i8")->unary_op() == UnaryOp::Not);
  CHECK(parse_expr("!p0:i32")->unary_op() == UnaryOp::LogicNegate);
  CHECK(parse_expr("-p0:i8")->unary_op() == UnaryOp::Neg);
}

TEST_CASE("ground mode rejects pattern forms") {
  CHECK_THROWS_AS((void)parse_expr("x + y"), ParseError);
  CHECK_THROWS_AS((void)parse_expr("const c"), ParseError);
  CHECK_THROWS_AS((void)parse_expr("zero_like(x)"), ParseError);
  CHECK_THROWS_AS((void)parse_expr("42"), ParseError);
  CHECK_THROWS_AS((void)parse_expr("p0"), ParseError);
  CHECK_THROWS_AS((void)parse_expr("const i65 0"), ParseError);
  CHECK_THROWS_AS((void)parse_expr("const i8 300"), ParseError);
  CHECK_THROWS_AS((void)parse_expr("p0:i8[5,3]"), ParseError);
}

TEST_CASE("patterns bind metavariables") {
  TermPtr p = parse_pattern("(x - y) + y");
  CHECK(p->binary_op() == BinaryOp::Add);
  CHECK(p->child(1)->kind() == TermKind::MetaVar);
  CHECK(p->child(1)->var_name() == "y");
  TermPtr c = parse_pattern("const c + y");
  CHECK(c->child(0)->kind() == TermKind::ConstMetaVar);
}

TEST_CASE("parse errors carry positions") {
  try {
    (void)parse_expr("const i8 1 +\n  @");
    FAIL("expected a parse error");
  } catch (const ParseError &e) {
    CHECK(e.line == 2);
    CHECK(e.col == 3);
  }
}

TEST_CASE("rule files parse into phases") {
  ParsedRules r = parse_rules(
      "// conditional canonicalization\n"
      "phase ConditionalCanon {\n"
      "  NegateCond: ((!c) ? t : f) |-> (c ? f : t);\n"
      "  TrueCond: (true ? t : f) |-> t;\n"
      "  FalseCond: (false ? t : f) |-> f;\n"
      "  BranchEqual: (c ? x : x) |-> x;\n"
      "  LessCond: ((u < v) ? t : f) |-> t when StampUnder(u, v);\n"
      "}\n");
  REQUIRE(r.phases.size() == 1);
  const Phase &p = r.phases[0];
  CHECK(p.name == "ConditionalCanon");
  CHECK(p.measure == "trm");
  REQUIRE(p.rules.size() == 5);
  CHECK(p.rules[4].name == "LessCond");
  CHECK(p.rules[4].cond->kind == Condition::Kind::StampUnder);
  CHECK(r.warnings.empty());
}

TEST_CASE("unbound right-side variables are hard errors") {
  CHECK_THROWS_AS((void)parse_rules("phase P { R: x |-> y; }"), ParseError);
  CHECK_THROWS_AS((void)parse_rules("phase P { R: x |-> x when IsConstant(y); }"),
                  ParseError);
  CHECK_THROWS_AS((void)parse_rules("phase P { R: zero_like(x) |-> x; }"),
                  ParseError);
  // A name cannot be both a plain and a const metavariable.
  CHECK_THROWS_AS((void)parse_rules("phase P { R: x + const x |-> x; }"),
                  ParseError);
}

TEST_CASE("duplicate rule names warn and auto-suffix") {
  ParsedRules r = parse_rules("phase P { A: x + y |-> x; A: x - y |-> x; }");
  REQUIRE(r.phases[0].rules.size() == 2);
  CHECK(r.phases[0].rules[0].name == "A");
  CHECK(r.phases[0].rules[1].name == "A_2");
  REQUIRE(r.warnings.size() == 1);
  CHECK(r.warnings[0].find("duplicate") != std::string::npos);
}

TEST_CASE("measure and unchecked annotations") {
  ParsedRules r = parse_rules(
      "phase P measure trm { unchecked R: x + y |-> y + x; }\n");
  CHECK(r.phases[0].measure == "trm");
  CHECK(r.phases[0].rules[0].unchecked);
}

TEST_CASE("conditions parse with boolean structure") {
  ParsedRules r = parse_rules(
      "phase P {\n"
      "  R: x + y |-> y + x when !IsConstant(y) && (IsConstant(x) || true);\n"
      "  S: x + y |-> x + y when WidthEq(x, y) && y == const i32 0;\n"
      "}\n");
  const auto &c = *r.phases[0].rules[0].cond;
  CHECK(c.kind == Condition::Kind::And);
  CHECK(c.lhs->kind == Condition::Kind::Not);
  const auto &s = *r.phases[0].rules[1].cond;
  CHECK(s.rhs->kind == Condition::Kind::ConstEq);
  CHECK(s.rhs->cval == Value::of(32, 0));
}

TEST_CASE("stamps and values parse standalone") {
  CHECK(parse_stamp("i32") == Stamp::integer_full(32));
  CHECK(parse_stamp("i8[0,5]") == Stamp::integer(8, 0, 5));
  CHECK(parse_value("i8 -1") == Value::of(8, 255));
  CHECK(parse_value("i32 7") == Value::of(32, 7));
  CHECK_THROWS_AS((void)parse_stamp("i0"), ParseError);
  CHECK_THROWS_AS((void)parse_value("i8 banana"), ParseError);
}

TEST_CASE("rendered terms re-parse to the same tree") {
  gen::Rng rng(99);
  for (int i = 0; i < 500; ++i) {
    TermPtr e = gen::random_term(rng, 4, {1, 4, 8, 32, 64}, 3);
    TermPtr back = parse_expr(to_dsl(*e));
    REQUIRE(struct_eq(e, back));
  }
}

TEST_CASE("rendered patterns re-parse to the same tree") {
  const char *patterns[] = {
      "(x - y) + y",
      "x - (x - y)",
      "const c + y",
      "((!c) ? t : f)",
      "((u < v) ? t : f)",
      "x - x",
      "(c ? x : x)",
  };
  for (const char *p : patterns) {
    TermPtr parsed = parse_pattern(p);
    CHECK(struct_eq(parsed, parse_pattern(to_dsl(*parsed))));
  }
  // zero_like round-trips inside a rule body.
  RewriteRule r = parse_rule_body("x - x |-> zero_like(x)");
  CHECK(r.rhs->kind() == TermKind::ZeroLike);
  RewriteRule again =
      parse_rule_body(to_dsl(*r.lhs) + " |-> " + to_dsl(*r.rhs));
  CHECK(struct_eq(r.rhs, again.rhs));
}
