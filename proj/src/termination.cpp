//===- termination.cpp - Symbolic measure-decrease checking ---------------===//
//
// Part of the termcanon project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "canon/termination.hpp"

#include <algorithm>

namespace canon {

uint64_t trm(const Term &e) {
  switch (e.kind()) {
  case TermKind::Constant:
  case TermKind::Parameter:
  case TermKind::Leaf:
    return 1;
  case TermKind::Unary:
    return trm(*e.child(0)) + 1;
  case TermKind::Binary: {
    uint64_t w = e.child(1)->kind() == TermKind::Constant ? 1 : 2;
    return trm(*e.child(0)) + trm(*e.child(1)) + w;
  }
  case TermKind::Conditional:
    return trm(*e.child(0)) + trm(*e.child(1)) + trm(*e.child(2)) + 2;
  default:
    assert(false && "trm is defined on ground terms only");
    return 1;
  }
}

SizePoly SizePoly::operator-(const SizePoly &o) const {
  SizePoly d = *this;
  d.constant -= o.constant;
  for (const auto &[v, c] : o.coeffs) {
    d.coeffs[v] -= c;
    if (d.coeffs[v] == 0)
      d.coeffs.erase(v);
  }
  return d;
}

int64_t SizePoly::at_unit_sizes() const {
  int64_t x = constant;
  for (const auto &[v, c] : coeffs)
    x += c;
  return x;
}

bool SizePoly::coeffs_nonnegative() const {
  return std::all_of(coeffs.begin(), coeffs.end(),
                     [](const auto &kv) { return kv.second >= 0; });
}

std::string SizePoly::to_string() const {
  std::string s = std::to_string(constant);
  for (const auto &[v, c] : coeffs) {
    s += c >= 0 ? " + " : " - ";
    s += std::to_string(c >= 0 ? c : -c) + "*size(" + v + ")";
  }
  return s;
}

namespace {

bool counts_as_constant(const Term &t, const std::set<std::string> &cv) {
  switch (t.kind()) {
  case TermKind::Constant:
  case TermKind::ConstMetaVar:
  case TermKind::ZeroLike:
    return true;
  case TermKind::MetaVar:
    return cv.count(t.var_name()) != 0;
  default:
    return false;
  }
}

void sym_into(const Term &t, const std::set<std::string> &cv, SizePoly &p) {
  switch (t.kind()) {
  case TermKind::Constant:
  case TermKind::Parameter:
  case TermKind::Leaf:
  case TermKind::ConstMetaVar:
  case TermKind::ZeroLike:
    p.constant += 1;
    return;
  case TermKind::MetaVar:
    if (cv.count(t.var_name()))
      p.constant += 1;
    else
      p.coeffs[t.var_name()] += 1;
    return;
  case TermKind::Unary:
    p.constant += 1;
    sym_into(*t.child(0), cv, p);
    return;
  case TermKind::Binary:
    p.constant += counts_as_constant(*t.child(1), cv) ? 1 : 2;
    sym_into(*t.child(0), cv, p);
    sym_into(*t.child(1), cv, p);
    return;
  case TermKind::Conditional:
    p.constant += 2;
    for (const auto &c : t.children())
      sym_into(*c, cv, p);
    return;
  }
}

enum class Tri { False, True, Unknown };

Tri tri_not(Tri t) {
  if (t == Tri::Unknown)
    return Tri::Unknown;
  return t == Tri::True ? Tri::False : Tri::True;
}

Tri tri_and(Tri a, Tri b) {
  if (a == Tri::False || b == Tri::False)
    return Tri::False;
  if (a == Tri::True && b == Tri::True)
    return Tri::True;
  return Tri::Unknown;
}

Tri tri_or(Tri a, Tri b) {
  if (a == Tri::True || b == Tri::True)
    return Tri::True;
  if (a == Tri::False && b == Tri::False)
    return Tri::False;
  return Tri::Unknown;
}

// Truth of the condition given only which variables bind constants.
Tri cond_truth(const Condition &c, const std::set<std::string> &cv) {
  switch (c.kind) {
  case Condition::Kind::True:
    return Tri::True;
  case Condition::Kind::IsConstant:
    return cv.count(c.a) ? Tri::True : Tri::False;
  case Condition::Kind::ConstEq:
    // A non-constant binding can never equal a specific constant.
    return cv.count(c.a) ? Tri::Unknown : Tri::False;
  case Condition::Kind::StampUnder:
  case Condition::Kind::WidthEq:
    return Tri::Unknown;
  case Condition::Kind::And:
    return tri_and(cond_truth(*c.lhs, cv), cond_truth(*c.rhs, cv));
  case Condition::Kind::Or:
    return tri_or(cond_truth(*c.lhs, cv), cond_truth(*c.rhs, cv));
  case Condition::Kind::Not:
    return tri_not(cond_truth(*c.lhs, cv));
  }
  return Tri::Unknown;
}

void collect_const_metavars(const Term &t, std::set<std::string> &out) {
  if (t.kind() == TermKind::ConstMetaVar)
    out.insert(t.var_name());
  for (const auto &c : t.children())
    collect_const_metavars(*c, out);
}

} // namespace

SizePoly symbolic_trm(const Term &pattern,
                      const std::set<std::string> &const_vars) {
  SizePoly p;
  sym_into(pattern, const_vars, p);
  return p;
}

std::string TerminationVerdict::describe() const {
  if (decreases)
    return "Decreases";
  std::string s = "MayNotDecrease";
  if (failing_difference) {
    s += " [case:";
    if (failing_const_vars.empty())
      s += " all variables non-constant";
    else
      for (const auto &v : failing_const_vars)
        s += " " + v + "=constant";
    s += "; lhs-rhs = " + failing_difference->to_string() + "]";
  }
  return s;
}

TerminationVerdict check_termination(const RewriteRule &rule,
                                     const std::string &measure) {
  if (measure != "trm")
    throw RuleError("unknown measure '" + measure + "' (only trm is shipped)");

  std::set<std::string> forced;
  collect_const_metavars(*rule.lhs, forced);
  collect_const_metavars(*rule.rhs, forced);

  std::vector<std::string> vars = collect_vars(*rule.lhs);
  std::vector<std::string> free;
  for (const auto &v : vars)
    if (!forced.count(v))
      free.push_back(v);

  // Every flag assignment consistent with the condition must decrease.
  // Mask bit i marks free[i] as binding a constant; the all-non-constant
  // case comes first so it is the reported witness for symmetric rules.
  for (uint64_t mask = 0; mask < (uint64_t{1} << free.size()); ++mask) {
    std::set<std::string> cv = forced;
    for (size_t i = 0; i < free.size(); ++i)
      if (mask & (uint64_t{1} << i))
        cv.insert(free[i]);
    if (rule.cond && cond_truth(*rule.cond, cv) == Tri::False)
      continue;
    SizePoly diff = symbolic_trm(*rule.lhs, cv) - symbolic_trm(*rule.rhs, cv);
    if (!diff.coeffs_nonnegative() || diff.at_unit_sizes() <= 0) {
      TerminationVerdict v;
      v.decreases = false;
      v.failing_const_vars = cv;
      v.failing_difference = diff;
      return v;
    }
  }
  TerminationVerdict v;
  v.decreases = true;
  return v;
}

} // namespace canon
