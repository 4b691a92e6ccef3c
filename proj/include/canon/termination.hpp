//===- termination.hpp - Rewrite termination measure ------------*- C++ -*-===//
//
// Part of the termcanon project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// The measure `trm` weights a binary node lower when its right operand is a
// constant, so constant-normalizing commutes still decrease:
//
//   trm(leaf forms)      = 1
//   trm(unary op e)      = trm(e) + 1
//   trm(l op r)          = trm(l) + trm(r) + (r constant ? 1 : 2)
//   trm(c ? t : f)       = trm(c) + trm(t) + trm(f) + 2
//
// On patterns the measure is a linear polynomial over per-variable size
// symbols; the checker proves `trm lhs > trm rhs` for every assignment of
// is-constant flags consistent with the rule's condition, using size >= 1
// (size = 1 exactly for constant-flagged variables).
//
//===----------------------------------------------------------------------===//

#ifndef CANON_TERMINATION_HPP
#define CANON_TERMINATION_HPP

#include "canon/rules.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>

namespace canon {

/// Ground measure; the argument must contain no pattern-only forms.
uint64_t trm(const Term &e);

/// Linear form c0 + sum(coeff[v] * size(v)) over metavariable sizes.
struct SizePoly {
  int64_t constant = 0;
  std::map<std::string, int64_t> coeffs;

  SizePoly operator-(const SizePoly &o) const;
  /// Value with every size symbol set to 1.
  int64_t at_unit_sizes() const;
  bool coeffs_nonnegative() const;
  std::string to_string() const;
};

/// Symbolic measure of a pattern under an assignment of is-constant flags.
/// Constant-flagged variables contribute size exactly 1 and count as
/// constants for the right-operand weighting.
SizePoly symbolic_trm(const Term &pattern,
                      const std::set<std::string> &const_vars);

struct TerminationVerdict {
  bool decreases = false;
  /// Present when the verdict is MayNotDecrease: the failing flag
  /// assignment and the offending difference polynomial.
  std::set<std::string> failing_const_vars;
  std::optional<SizePoly> failing_difference;

  std::string describe() const;
};

/// Prove that every application of the rule strictly decreases the measure,
/// case-split over is-constant flag assignments consistent with the rule's
/// condition. Sound but incomplete: a decrease that depends on non-size
/// reasoning is rejected. Only the `trm` measure is implemented; any other
/// identifier throws RuleError.
TerminationVerdict check_termination(const RewriteRule &rule,
                                     const std::string &measure = "trm");

} // namespace canon

#endif // CANON_TERMINATION_HPP
