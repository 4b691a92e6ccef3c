//===- test_refine.cpp - Bounded refinement checking tests -----------------===//
//
// Part of the termcanon project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "canon/parse.hpp"
#include "canon/refine.hpp"
#include "support/generators.hpp"

#include <doctest.h>
#include <fstream>
#include <sstream>

using namespace canon;

namespace {

std::string read_file(const std::string &path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RewriteRule rule(const std::string &name, const std::string &body) {
  RewriteRule r = parse_rule_body(body);
  r.name = name;
  return r;
}

} // namespace

TEST_CASE("x - x is refined by zero but not conversely") {
  CheckConfig cfg;
  TermPtr sub = parse_expr("p0:i4 - p0:i4");
  TermPtr zero = parse_expr("const i4 0");
  Verdict fwd = refines(sub, zero, cfg);
  CHECK(fwd.verified_bounded());
  CHECK(fwd.contexts_checked() == 16); // all width-4 values of p0

  // The constant is defined in the empty context; x - x is not.
  Verdict rev = refines(zero, sub, cfg);
  REQUIRE(rev.kind() == Verdict::Kind::Counterexample);
  CHECK(rev.counterexample().context.params.empty());
  CHECK(rev.counterexample().lhs_result.defined());
  CHECK_FALSE(rev.counterexample().rhs_result.defined());
}

TEST_CASE("refinement is reflexive on arbitrary terms") {
  CheckConfig cfg;
  gen::Rng rng(5);
  for (int i = 0; i < 60; ++i) {
    TermPtr e = gen::random_evaluable_term(rng, 3, 2, 2);
    Verdict v = refines(e, e, cfg);
    // Reflexivity can never produce a counterexample; terms that are
    // nowhere defined report Inapplicable instead.
    REQUIRE(v.kind() != Verdict::Kind::Counterexample);
  }
  CHECK(refines(parse_expr("p0:i2 + p1:i2"), parse_expr("p0:i2 + p1:i2"), cfg)
            .verified_bounded());
}

TEST_CASE("a never-defined left side is reported as inapplicable") {
  CheckConfig cfg;
  TermPtr bad = parse_expr("p0:i8 + p1:i16");
  CHECK(refines(bad, bad, cfg).kind() == Verdict::Kind::Inapplicable);
}

TEST_CASE("shipped rules are sound up to the bound") {
  CheckConfig cfg;
  ParsedRules shipped =
      parse_rules(read_file(TERMCANON_RULES_DIR "/paper.rules"));
  for (const auto &phase : shipped.phases)
    for (const auto &r : phase.rules) {
      CAPTURE(r.name);
      Verdict v = check_rule_soundness(r, cfg);
      REQUIRE(v.verified_bounded());
      REQUIRE(v.contexts_checked() > 0);
    }
}

TEST_CASE("LessCond is exercised through narrowed stamps") {
  CheckConfig cfg;
  Verdict v = check_rule_soundness(
      rule("LessCond", "((u < v) ? t : f) |-> t when StampUnder(u, v)"), cfg);
  REQUIRE(v.verified_bounded());
  CHECK(v.contexts_checked() > 1000);
}

TEST_CASE("wrong rules produce replayable counterexamples") {
  CheckConfig cfg;
  for (const char *body : {"x - y |-> y - x", "x + y |-> x"}) {
    CAPTURE(body);
    Verdict v = check_rule_soundness(rule("Wrong", body), cfg);
    REQUIRE(v.kind() == Verdict::Kind::Counterexample);
    const Counterexample &ce = v.counterexample();

    // Replay: substituting the stored instantiation and re-evaluating in
    // the stored context reproduces the recorded disagreement bit-exactly.
    RewriteRule r = rule("Wrong", body);
    TermPtr lhs = substitute(r.lhs, ce.instantiation);
    TermPtr rhs = substitute(r.rhs, ce.instantiation);
    REQUIRE(lhs);
    REQUIRE(rhs);
    CHECK(evaluate(ce.context, *lhs) == ce.lhs_result);
    CHECK(evaluate(ce.context, *rhs) == ce.rhs_result);
    CHECK(ce.lhs_result.defined());
    bool disagrees = !ce.rhs_result.defined() ||
                     !(ce.rhs_result.value() == ce.lhs_result.value());
    CHECK(disagrees);
  }
}

TEST_CASE("flipping the inner subtraction of a shipped rule is caught") {
  CheckConfig cfg;
  CHECK(check_rule_soundness(rule("Flipped", "x - (y - x) |-> y"), cfg).kind() ==
        Verdict::Kind::Counterexample);
  CHECK(check_rule_soundness(rule("Flipped", "(y - x) + y |-> x"), cfg).kind() ==
        Verdict::Kind::Counterexample);
}

TEST_CASE("verdicts are deterministic under a fixed seed") {
  CheckConfig cfg;
  cfg.rng_seed = 42;
  RewriteRule wrong = rule("Wrong", "x - y |-> y - x");
  Verdict a = check_rule_soundness(wrong, cfg);
  Verdict b = check_rule_soundness(wrong, cfg);
  REQUIRE(a.kind() == Verdict::Kind::Counterexample);
  REQUIRE(b.kind() == Verdict::Kind::Counterexample);
  CHECK(a.counterexample().to_string() == b.counterexample().to_string());
  CHECK(a.counterexample().context == b.counterexample().context);

  ParsedRules shipped =
      parse_rules(read_file(TERMCANON_RULES_DIR "/paper.rules"));
  const RewriteRule &first = shipped.phases[0].rules[0];
  CHECK(check_rule_soundness(first, cfg).contexts_checked() ==
        check_rule_soundness(first, cfg).contexts_checked());
}

TEST_CASE("a rule whose condition is unsatisfiable is inapplicable") {
  CheckConfig cfg;
  Verdict v = check_rule_soundness(
      rule("Dead", "x + y |-> x + y when IsConstant(x) && !IsConstant(x)"),
      cfg);
  CHECK(v.kind() == Verdict::Kind::Inapplicable);
}

TEST_CASE("monotonicity: refinements survive surrounding contexts") {
  CheckConfig cfg;
  TermPtr e1 = parse_expr("p1:i2 - p1:i2");
  TermPtr e2 = parse_expr("const i2 0");
  REQUIRE(refines(e1, e2, cfg).verified_bounded());

  CHECK(check_monotone(parse_pattern("hole + p0:i2"), e1, e2, cfg)
            .verified_bounded());
  CHECK(check_monotone(parse_pattern("hole"), e1, e2, cfg).verified_bounded());
  CHECK(check_monotone(
            parse_pattern("(p0:i2 == p0:i2) ? hole : p0:i2"), e1, e2, cfg)
            .verified_bounded());
  CHECK_THROWS_AS(
      (void)check_monotone(parse_pattern("a + b"), e1, e2, cfg), RuleError);
}

TEST_CASE("report lines follow the fixed format") {
  CheckConfig cfg;
  RuleReport ok;
  ok.name = "Good";
  ok.termination.decreases = true;
  ok.soundness = Verdict::verified(123);
  CHECK(report_line(ok) == "RULE Good: PASS(123 contexts)");

  RuleReport bad;
  bad.name = "Bad";
  bad.termination.decreases = true;
  bad.soundness = check_rule_soundness(rule("Bad", "x + y |-> x"), cfg);
  CHECK(report_line(bad).rfind("RULE Bad: FAIL ", 0) == 0);

  RuleReport dead;
  dead.name = "Dead";
  dead.termination.decreases = true;
  dead.soundness = Verdict::inapplicable("no instantiation");
  CHECK(report_line(dead) == "RULE Dead: INAPPLICABLE no instantiation");
}

TEST_CASE("the checker finds every counterexample a naive quantifier finds") {
  // Brute force over every context with up to two parameters drawn from
  // all width-1 and width-2 bit patterns; the checker must not miss any
  // disagreement the naive search can see.
  std::vector<Value> vals;
  for (unsigned w : {1u, 2u})
    for (uint64_t b = 0; b < (uint64_t{1} << w); ++b)
      vals.push_back(Value::of(w, b));
  std::vector<EvalContext> brute;
  brute.push_back({});
  for (const Value &a : vals) {
    EvalContext c1;
    c1.params = {a};
    brute.push_back(c1);
    for (const Value &b : vals) {
      EvalContext c2;
      c2.params = {a, b};
      brute.push_back(c2);
    }
  }

  CheckConfig cfg;
  cfg.exhaustive_widths = {1, 2};
  cfg.sample_widths = {8};
  cfg.samples_per_width = 32;
  gen::Rng rng(31337);
  size_t brute_ce = 0;
  for (int i = 0; i < 5000; ++i) {
    TermPtr e1 = gen::random_term(rng, 3, {1, 2}, 2);
    TermPtr e2 = gen::random_term(rng, 3, {1, 2}, 2);
    bool brute_found = false;
    for (const EvalContext &ctx : brute) {
      EvalResult r1 = evaluate(ctx, *e1);
      if (!r1.defined())
        continue;
      EvalResult r2 = evaluate(ctx, *e2);
      if (!r2.defined() || !(r2.value() == r1.value())) {
        brute_found = true;
        break;
      }
    }
    Verdict v = refines(e1, e2, cfg);
    if (brute_found) {
      ++brute_ce;
      REQUIRE(v.kind() == Verdict::Kind::Counterexample);
    } else if (v.kind() == Verdict::Kind::Counterexample) {
      const Counterexample &ce = v.counterexample();
      EvalResult r1 = evaluate(ce.context, *e1);
      EvalResult r2 = evaluate(ce.context, *e2);
      bool genuine =
          r1.defined() && (!r2.defined() || !(r2.value() == r1.value()));
      REQUIRE(genuine); // claimed counterexamples must replay
    }
  }
  CHECK(brute_ce > 500);
}

TEST_CASE("context dumps are replayable by construction") {
  CheckConfig cfg;
  Verdict v = check_rule_soundness(rule("Wrong", "x | y |-> x"), cfg);
  REQUIRE(v.kind() == Verdict::Kind::Counterexample);
  std::string text = v.counterexample().to_string();
  CHECK(text.find("instantiation") != std::string::npos);
  CHECK(text.find("context") != std::string::npos);
  CHECK(text.find("lhs=") != std::string::npos);
  CHECK(text.find("rhs=") != std::string::npos);
}
