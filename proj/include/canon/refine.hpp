//===- refine.hpp - Bounded refinement checking ------------------*- C++ -*-===//
//
// Part of the termcanon project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// `e1 refines-to e2` holds when e2 is defined and agrees with e1 in every
// context where e1 is defined; e2 may be defined in more contexts. The
// checker substitutes exhaustive small-width context enumeration plus
// seeded corner/random sampling for a proof, so a passing verdict is
// "verified up to the configured bound", never more.
//
//===----------------------------------------------------------------------===//

#ifndef CANON_REFINE_HPP
#define CANON_REFINE_HPP

#include "canon/rules.hpp"
#include "canon/termination.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace canon {

struct CheckConfig {
  /// Widths whose parameter/leaf slots are enumerated exhaustively.
  std::vector<unsigned> exhaustive_widths{1, 2, 4};
  /// Widths checked with corner values plus seeded random values.
  std::vector<unsigned> sample_widths{8, 32, 64};
  unsigned samples_per_width = 256;
  unsigned max_instantiation_depth = 2;
  uint64_t rng_seed = 1;

  /// Hard cap on the exhaustive cross-product per check; slots beyond it
  /// fall back to seeded sampling.
  static constexpr uint64_t kMaxExhaustiveContexts = uint64_t{1} << 20;
};

struct Counterexample {
  Substitution instantiation; // empty for a plain refines() check
  EvalContext context;
  EvalResult lhs_result;
  EvalResult rhs_result;

  std::string to_string() const;
};

/// Outcome of a bounded check.
class Verdict {
public:
  enum class Kind { VerifiedBounded, Counterexample, Inapplicable };

  static Verdict verified(uint64_t contexts_checked) {
    Verdict v;
    v.kind_ = Kind::VerifiedBounded;
    v.contexts_ = contexts_checked;
    return v;
  }
  static Verdict counterexample(Counterexample ce) {
    Verdict v;
    v.kind_ = Kind::Counterexample;
    v.ce_ = std::move(ce);
    return v;
  }
  static Verdict inapplicable(std::string reason) {
    Verdict v;
    v.kind_ = Kind::Inapplicable;
    v.reason_ = std::move(reason);
    return v;
  }

  Kind kind() const { return kind_; }
  bool verified_bounded() const { return kind_ == Kind::VerifiedBounded; }
  uint64_t contexts_checked() const { return contexts_; }
  const Counterexample &counterexample() const { return ce_; }
  const std::string &reason() const { return reason_; }

private:
  Kind kind_ = Kind::Inapplicable;
  uint64_t contexts_ = 0;
  Counterexample ce_;
  std::string reason_;
};

/// Bounded check that e1 is refined by e2 (both ground). Contexts are
/// enumerated from the parameters and leaves the two terms reference;
/// contexts where e1 is not defined impose no constraint. Deterministic
/// for a fixed config; the first violation in canonical enumeration order
/// is returned.
Verdict refines(const TermPtr &e1, const TermPtr &e2, const CheckConfig &cfg);

/// Bounded check of `cond implies lhs refined-by rhs` over generated
/// metavariable instantiations: parameters with full and narrowed stamps,
/// corner constants at every configured width, and small composites.
/// Instantiations failing the rule condition are skipped; Inapplicable
/// means no instantiation satisfied it (likely a dead rule).
Verdict check_rule_soundness(const RewriteRule &rule, const CheckConfig &cfg);

/// Monotonicity harness: given an outer context containing exactly one
/// metavariable (the hole), checks refines(outer[e1], outer[e2]).
Verdict check_monotone(const TermPtr &outer_with_hole, const TermPtr &e1,
                       const TermPtr &e2, const CheckConfig &cfg);

/// Per-rule report: termination verdict plus bounded soundness verdict.
struct RuleReport {
  std::string name;
  bool unchecked = false;
  TerminationVerdict termination;
  Verdict soundness;

  bool passed() const {
    return (termination.decreases || unchecked) && soundness.verified_bounded();
  }
};

/// One line per rule: `RULE <name>: PASS(<n> contexts)` or
/// `FAIL <witness>` or `INAPPLICABLE <reason>`.
std::string report_line(const RuleReport &r);

/// Check every rule of every phase; deterministic order.
std::vector<RuleReport> verify_phases(const std::vector<Phase> &phases,
                                      const CheckConfig &cfg);

} // namespace canon

#endif // CANON_REFINE_HPP
