//===- rules.cpp - Matching, substitution and phase application -----------===//
//
// Part of the termcanon project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "canon/rules.hpp"
#include "canon/termination.hpp"

#include <algorithm>

namespace canon {

static ConditionPtr make(Condition c) {
  return std::make_shared<Condition>(std::move(c));
}

ConditionPtr Condition::truth() { return make({}); }

ConditionPtr Condition::is_constant(std::string v) {
  Condition c;
  c.kind = Kind::IsConstant;
  c.a = std::move(v);
  return make(std::move(c));
}

ConditionPtr Condition::stamp_under_cond(std::string a, std::string b) {
  Condition c;
  c.kind = Kind::StampUnder;
  c.a = std::move(a);
  c.b = std::move(b);
  return make(std::move(c));
}

ConditionPtr Condition::width_eq(std::string a, std::string b) {
  Condition c;
  c.kind = Kind::WidthEq;
  c.a = std::move(a);
  c.b = std::move(b);
  return make(std::move(c));
}

ConditionPtr Condition::const_eq(std::string v, Value val) {
  Condition c;
  c.kind = Kind::ConstEq;
  c.a = std::move(v);
  c.cval = val;
  return make(std::move(c));
}

ConditionPtr Condition::conj(ConditionPtr l, ConditionPtr r) {
  Condition c;
  c.kind = Kind::And;
  c.lhs = std::move(l);
  c.rhs = std::move(r);
  return make(std::move(c));
}

ConditionPtr Condition::disj(ConditionPtr l, ConditionPtr r) {
  Condition c;
  c.kind = Kind::Or;
  c.lhs = std::move(l);
  c.rhs = std::move(r);
  return make(std::move(c));
}

ConditionPtr Condition::negate(ConditionPtr c) {
  Condition n;
  n.kind = Kind::Not;
  n.lhs = std::move(c);
  return make(std::move(n));
}

void Condition::collect_vars(std::vector<std::string> &out) const {
  auto add = [&out](const std::string &v) {
    if (!v.empty() &&
        std::find(out.begin(), out.end(), v) == out.end())
      out.push_back(v);
  };
  add(a);
  add(b);
  if (lhs)
    lhs->collect_vars(out);
  if (rhs)
    rhs->collect_vars(out);
}

std::string Condition::to_string() const {
  switch (kind) {
  case Kind::True:
    return "true";
  case Kind::IsConstant:
    return "IsConstant(" + a + ")";
  case Kind::StampUnder:
    return "StampUnder(" + a + ", " + b + ")";
  case Kind::WidthEq:
    return "WidthEq(" + a + ", " + b + ")";
  case Kind::ConstEq:
    return a + " == const " + cval.to_string();
  case Kind::And:
    return "(" + lhs->to_string() + " && " + rhs->to_string() + ")";
  case Kind::Or:
    return "(" + lhs->to_string() + " || " + rhs->to_string() + ")";
  case Kind::Not:
    return "!" + lhs->to_string();
  }
  return "?";
}

std::string to_string(const Substitution &s) {
  std::string out = "{";
  bool first = true;
  for (const auto &[name, t] : s) {
    if (!first)
      out += ", ";
    first = false;
    out += name + " := " + to_dsl(*t);
  }
  out += "}";
  return out;
}

namespace {

bool match_into(const Term &pattern, const TermPtr &term, Substitution &s) {
  switch (pattern.kind()) {
  case TermKind::MetaVar: {
    auto [it, inserted] = s.emplace(pattern.var_name(), term);
    return inserted || struct_eq(it->second, term);
  }
  case TermKind::ConstMetaVar: {
    if (term->kind() != TermKind::Constant)
      return false;
    auto [it, inserted] = s.emplace(pattern.var_name(), term);
    return inserted || struct_eq(it->second, term);
  }
  case TermKind::ZeroLike:
    assert(false && "zero_like is a template-only form");
    return false;
  default:
    break;
  }

  if (pattern.kind() != term->kind())
    return false;
  switch (pattern.kind()) {
  case TermKind::Constant:
    if (!(pattern.value() == term->value()))
      return false;
    break;
  case TermKind::Parameter:
  case TermKind::Leaf:
    if (pattern.index() != term->index() ||
        !(pattern.stamp() == term->stamp()))
      return false;
    break;
  case TermKind::Unary:
    if (pattern.unary_op() != term->unary_op())
      return false;
    break;
  case TermKind::Binary:
    if (pattern.binary_op() != term->binary_op())
      return false;
    break;
  case TermKind::Conditional:
    break;
  default:
    return false;
  }
  for (size_t i = 0; i < pattern.num_children(); ++i)
    if (!match_into(*pattern.child(i), term->child(i), s))
      return false;
  return true;
}

} // namespace

std::optional<Substitution> match(const Term &pattern, const TermPtr &term) {
  assert(term && term->is_ground());
  Substitution s;
  if (!match_into(pattern, term, s))
    return std::nullopt;
  return s;
}

TermPtr substitute(const TermPtr &tmpl, const Substitution &s) {
  switch (tmpl->kind()) {
  case TermKind::MetaVar:
  case TermKind::ConstMetaVar: {
    auto it = s.find(tmpl->var_name());
    if (it == s.end())
      throw RuleError("unbound variable '" + tmpl->var_name() +
                      "' in rewrite template");
    return it->second;
  }
  case TermKind::ZeroLike: {
    auto it = s.find(tmpl->var_name());
    if (it == s.end())
      throw RuleError("unbound variable '" + tmpl->var_name() +
                      "' in zero_like");
    Stamp st = infer_stamp(*it->second);
    if (!st.is_integer())
      return nullptr; // width unresolvable; the rule does not fire
    return Term::constant(Value::of(st.width(), 0));
  }
  case TermKind::Constant:
  case TermKind::Parameter:
  case TermKind::Leaf:
    return tmpl;
  case TermKind::Unary: {
    TermPtr a = substitute(tmpl->child(0), s);
    return a ? Term::unary(tmpl->unary_op(), std::move(a)) : nullptr;
  }
  case TermKind::Binary: {
    TermPtr l = substitute(tmpl->child(0), s);
    TermPtr r = l ? substitute(tmpl->child(1), s) : nullptr;
    return r ? Term::binary(tmpl->binary_op(), std::move(l), std::move(r))
             : nullptr;
  }
  case TermKind::Conditional: {
    TermPtr c = substitute(tmpl->child(0), s);
    TermPtr t = c ? substitute(tmpl->child(1), s) : nullptr;
    TermPtr f = t ? substitute(tmpl->child(2), s) : nullptr;
    return f ? Term::conditional(std::move(c), std::move(t), std::move(f))
             : nullptr;
  }
  }
  return nullptr;
}

bool eval_condition(const Condition &cond, const Substitution &s) {
  auto bound = [&s](const std::string &v) -> const TermPtr & {
    auto it = s.find(v);
    if (it == s.end())
      throw RuleError("condition references unbound variable '" + v + "'");
    return it->second;
  };
  switch (cond.kind) {
  case Condition::Kind::True:
    return true;
  case Condition::Kind::IsConstant:
    return bound(cond.a)->kind() == TermKind::Constant;
  case Condition::Kind::StampUnder:
    return stamp_under(infer_stamp(*bound(cond.a)), infer_stamp(*bound(cond.b)));
  case Condition::Kind::WidthEq: {
    Stamp sa = infer_stamp(*bound(cond.a));
    Stamp sb = infer_stamp(*bound(cond.b));
    return sa.is_integer() && sb.is_integer() && sa.width() == sb.width();
  }
  case Condition::Kind::ConstEq: {
    const TermPtr &t = bound(cond.a);
    return t->kind() == TermKind::Constant && t->value() == cond.cval;
  }
  case Condition::Kind::And:
    return eval_condition(*cond.lhs, s) && eval_condition(*cond.rhs, s);
  case Condition::Kind::Or:
    return eval_condition(*cond.lhs, s) || eval_condition(*cond.rhs, s);
  case Condition::Kind::Not:
    return !eval_condition(*cond.lhs, s);
  }
  return false;
}

std::optional<TermPtr> apply_rule(const RewriteRule &rule, const TermPtr &e) {
  auto s = match(*rule.lhs, e);
  if (!s)
    return std::nullopt;
  if (rule.cond && !eval_condition(*rule.cond, *s))
    return std::nullopt;
  TermPtr out = substitute(rule.rhs, *s);
  if (!out)
    return std::nullopt;
  assert(trm(*e) > trm(*out) && "rewrite must decrease the measure");
  return out;
}

namespace {

// Guards against runaway phases admitted with `unchecked`.
constexpr size_t kRewriteFuel = 1u << 20;

TermPtr optimize_rec(const Phase &phase, const TermPtr &e, size_t &fuel) {
  // Children first.
  TermPtr cur = e;
  if (e->num_children() > 0) {
    std::vector<TermPtr> kids;
    kids.reserve(e->num_children());
    bool changed = false;
    for (const auto &c : e->children()) {
      TermPtr oc = optimize_rec(phase, c, fuel);
      changed |= oc != c;
      kids.push_back(std::move(oc));
    }
    if (changed) {
      switch (e->kind()) {
      case TermKind::Unary:
        cur = Term::unary(e->unary_op(), kids[0]);
        break;
      case TermKind::Binary:
        cur = Term::binary(e->binary_op(), kids[0], kids[1]);
        break;
      case TermKind::Conditional:
        cur = Term::conditional(kids[0], kids[1], kids[2]);
        break;
      default:
        break;
      }
    }
  }

  // Then the root, re-optimizing every rewrite result until no rule fires.
  for (;;) {
    bool fired = false;
    for (const auto &rule : phase.rules) {
      if (auto rw = apply_rule(rule, cur)) {
        if (fuel-- == 0)
          throw RuleError("phase '" + phase.name +
                          "' exceeded the rewrite budget (non-terminating "
                          "rule set?)");
        cur = optimize_rec(phase, *rw, fuel);
        fired = true;
        break;
      }
    }
    if (!fired)
      return cur;
  }
}

} // namespace

TermPtr optimize_term(const Phase &phase, const TermPtr &e) {
  assert(e && e->is_ground());
  size_t fuel = kRewriteFuel;
  return optimize_rec(phase, e, fuel);
}

TermPtr optimize_term(std::span<const Phase> phases, const TermPtr &e) {
  TermPtr cur = e;
  for (const Phase &p : phases)
    cur = optimize_term(p, cur);
  return cur;
}

} // namespace canon
