//===- rules.hpp - Conditional rewrite rules and phases ---------*- C++ -*-===//
//
// Part of the termcanon project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#ifndef CANON_RULES_HPP
#define CANON_RULES_HPP

#include "canon/term.hpp"

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace canon {

class RuleError : public std::runtime_error {
public:
  explicit RuleError(const std::string &msg) : std::runtime_error(msg) {}
};

/// Side condition attached to a rewrite rule; a boolean combination of
/// atoms over the pattern's metavariables.
struct Condition;
using ConditionPtr = std::shared_ptr<const Condition>;

struct Condition {
  enum class Kind : uint8_t {
    True,
    IsConstant, // a
    StampUnder, // a, b
    WidthEq,    // a, b
    ConstEq,    // a == a specific constant value
    And,
    Or,
    Not,
  };

  Kind kind = Kind::True;
  std::string a, b;
  Value cval;
  ConditionPtr lhs, rhs; // operands of And/Or; lhs of Not

  static ConditionPtr truth();
  static ConditionPtr is_constant(std::string v);
  static ConditionPtr stamp_under_cond(std::string a, std::string b);
  static ConditionPtr width_eq(std::string a, std::string b);
  static ConditionPtr const_eq(std::string v, Value val);
  static ConditionPtr conj(ConditionPtr l, ConditionPtr r);
  static ConditionPtr disj(ConditionPtr l, ConditionPtr r);
  static ConditionPtr negate(ConditionPtr c);

  /// Variables referenced by the condition.
  void collect_vars(std::vector<std::string> &out) const;
  std::string to_string() const;
};

/// Binding of metavariable names to (ground) terms.
using Substitution = std::map<std::string, TermPtr>;

std::string to_string(const Substitution &s);

struct RewriteRule {
  std::string name;
  TermPtr lhs;
  TermPtr rhs;
  ConditionPtr cond = Condition::truth();
  /// Admitted without a termination proof; reported loudly by the CLI.
  bool unchecked = false;
};

/// An ordered set of rewrite rules sharing one termination measure.
struct Phase {
  std::string name;
  std::string measure = "trm";
  std::vector<RewriteRule> rules;
};

/// Structural match of a pattern against a ground term. Repeated
/// metavariables require structurally identical sub-terms; `const`
/// metavariables match only constants; constant/parameter/leaf patterns
/// match value, index/id and stamp exactly.
std::optional<Substitution> match(const Term &pattern, const TermPtr &term);

/// Instantiate a template. Throws RuleError on an unbound variable.
/// Returns null when a zero_like width cannot be resolved (non-integer
/// inferred stamp of the bound term).
TermPtr substitute(const TermPtr &tmpl, const Substitution &s);

bool eval_condition(const Condition &cond, const Substitution &s);

/// One rewrite step at the root: match, check the condition, instantiate.
std::optional<TermPtr> apply_rule(const RewriteRule &rule, const TermPtr &e);

/// Optimize to the phase's normal form: post-order traversal, first
/// matching rule in declaration order, full recursive re-optimization of
/// every rewritten term, repeated at each node until no rule fires.
TermPtr optimize_term(const Phase &phase, const TermPtr &e);

/// Sequential application of several phases.
TermPtr optimize_term(std::span<const Phase> phases, const TermPtr &e);

} // namespace canon

#endif // CANON_RULES_HPP
