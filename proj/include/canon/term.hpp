//===- term.hpp - Expression AST and evaluation semantics -------*- C++ -*-===//
//
// Part of the termcanon project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// Terms are immutable, shareable expression trees. The same node type also
// carries the pattern-only forms (metavariables, `const` metavariables and
// `zero_like`); a term with none of those is "ground" and can be evaluated.
//
//===----------------------------------------------------------------------===//

#ifndef CANON_TERM_HPP
#define CANON_TERM_HPP

#include "canon/value.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace canon {

enum class TermKind : uint8_t {
  Constant,
  Parameter,
  Leaf,
  Unary,
  Binary,
  Conditional,
  // Pattern-only forms:
  MetaVar,
  ConstMetaVar,
  ZeroLike,
};

class Term;
using TermPtr = std::shared_ptr<const Term>;

class Term {
public:
  static TermPtr constant(Value v);
  static TermPtr parameter(uint32_t index, Stamp stamp);
  static TermPtr leaf(uint32_t node_id, Stamp stamp);
  static TermPtr unary(UnaryOp op, TermPtr arg);
  static TermPtr binary(BinaryOp op, TermPtr left, TermPtr right);
  static TermPtr conditional(TermPtr cond, TermPtr true_branch,
                             TermPtr false_branch);
  static TermPtr metavar(std::string name);
  static TermPtr const_metavar(std::string name);
  /// Pattern template producing a zero constant with the width of the
  /// term bound to `name`.
  static TermPtr zero_like(std::string name);

  TermKind kind() const { return kind_; }
  const Value &value() const { return value_; }
  uint32_t index() const { return index_; }
  const Stamp &stamp() const { return stamp_; }
  UnaryOp unary_op() const { return uop_; }
  BinaryOp binary_op() const { return bop_; }
  const std::string &var_name() const { return name_; }

  size_t num_children() const { return children_.size(); }
  const TermPtr &child(size_t i) const { return children_[i]; }
  const std::vector<TermPtr> &children() const { return children_; }

  /// True when the term contains no pattern-only forms.
  bool is_ground() const { return ground_; }

  /// Node count, >= 1.
  size_t size() const;

private:
  Term() = default;

  TermKind kind_ = TermKind::Constant;
  UnaryOp uop_ = UnaryOp::Neg;
  BinaryOp bop_ = BinaryOp::Add;
  Value value_;
  uint32_t index_ = 0;
  Stamp stamp_;
  std::string name_;
  std::vector<TermPtr> children_;
  bool ground_ = true;
};

bool struct_eq(const Term &a, const Term &b);
inline bool struct_eq(const TermPtr &a, const TermPtr &b) {
  return a == b || (a && b && struct_eq(*a, *b));
}

/// Names of metavariables (including `const` metavariables and zero_like
/// arguments), in order of first occurrence.
std::vector<std::string> collect_vars(const Term &t);

/// The context a term evaluates against: positional parameter values and
/// the pre-computed values of leaf nodes, keyed by node id.
struct EvalContext {
  std::vector<Value> params;
  std::map<uint32_t, Value> method_state;

  friend bool operator==(const EvalContext &, const EvalContext &) = default;
  std::string to_string() const;
};

enum class UndefReason : uint8_t {
  BadIndex,
  MissingLeaf,
  StampViolation,
  TypeMismatch,
  BadCondition,
};

const char *to_string(UndefReason r);

/// Outcome of evaluating a term: a defined value, or not-defined with a
/// diagnostic reason. A defined outcome is never the undefined Value.
class EvalResult {
public:
  static EvalResult ok(Value v) {
    EvalResult r;
    r.defined_ = true;
    r.value_ = v;
    return r;
  }
  static EvalResult not_defined(UndefReason reason) {
    EvalResult r;
    r.reason_ = reason;
    return r;
  }

  bool defined() const { return defined_; }
  const Value &value() const {
    assert(defined_);
    return value_;
  }
  UndefReason reason() const {
    assert(!defined_);
    return reason_;
  }

  friend bool operator==(const EvalResult &, const EvalResult &) = default;
  std::string to_string() const;

private:
  bool defined_ = false;
  Value value_;
  UndefReason reason_ = UndefReason::TypeMismatch;
};

/// Big-step evaluation. Partial: parameters require a valid index and a
/// value satisfying the declared stamp, leaves require a method-state entry
/// satisfying theirs, and conditionals require a 0/1-valued 32-bit condition
/// and evaluate only the selected branch. An undefined operator result makes
/// the whole evaluation not-defined. The term must be ground.
EvalResult evaluate(const EvalContext &ctx, const Term &e);

/// Static stamp of a term. Comparisons and logic negation are pinned to the
/// 0/1-valued 32-bit stamp; other operators get the conservative full range
/// at the left operand's width; width-inconsistent or non-integer
/// sub-expressions yield the illegal stamp.
Stamp infer_stamp(const Term &e);

/// Render in the concrete Java-like syntax accepted by the parser.
std::string to_dsl(const Term &e);

} // namespace canon

#endif // CANON_TERM_HPP
