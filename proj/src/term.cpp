//===- term.cpp - Expression AST and evaluation semantics -----------------===//
//
// Part of the termcanon project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "canon/term.hpp"

#include <algorithm>

namespace canon {

TermPtr Term::constant(Value v) {
  assert(!v.is_undef() && "constants are never the undefined value");
  auto t = std::shared_ptr<Term>(new Term());
  t->kind_ = TermKind::Constant;
  t->value_ = v;
  return t;
}

TermPtr Term::parameter(uint32_t index, Stamp stamp) {
  assert(stamp.is_integer());
  auto t = std::shared_ptr<Term>(new Term());
  t->kind_ = TermKind::Parameter;
  t->index_ = index;
  t->stamp_ = stamp;
  return t;
}

TermPtr Term::leaf(uint32_t node_id, Stamp stamp) {
  assert(stamp.is_integer());
  auto t = std::shared_ptr<Term>(new Term());
  t->kind_ = TermKind::Leaf;
  t->index_ = node_id;
  t->stamp_ = stamp;
  return t;
}

TermPtr Term::unary(UnaryOp op, TermPtr arg) {
  auto t = std::shared_ptr<Term>(new Term());
  t->kind_ = TermKind::Unary;
  t->uop_ = op;
  t->ground_ = arg->is_ground();
  t->children_ = {std::move(arg)};
  return t;
}

TermPtr Term::binary(BinaryOp op, TermPtr left, TermPtr right) {
  auto t = std::shared_ptr<Term>(new Term());
  t->kind_ = TermKind::Binary;
  t->bop_ = op;
  t->ground_ = left->is_ground() && right->is_ground();
  t->children_ = {std::move(left), std::move(right)};
  return t;
}

TermPtr Term::conditional(TermPtr cond, TermPtr true_branch,
                          TermPtr false_branch) {
  auto t = std::shared_ptr<Term>(new Term());
  t->kind_ = TermKind::Conditional;
  t->ground_ = cond->is_ground() && true_branch->is_ground() &&
               false_branch->is_ground();
  t->children_ = {std::move(cond), std::move(true_branch),
                  std::move(false_branch)};
  return t;
}

TermPtr Term::metavar(std::string name) {
  auto t = std::shared_ptr<Term>(new Term());
  t->kind_ = TermKind::MetaVar;
  t->name_ = std::move(name);
  t->ground_ = false;
  return t;
}

TermPtr Term::const_metavar(std::string name) {
  auto t = std::shared_ptr<Term>(new Term());
  t->kind_ = TermKind::ConstMetaVar;
  t->name_ = std::move(name);
  t->ground_ = false;
  return t;
}

TermPtr Term::zero_like(std::string name) {
  auto t = std::shared_ptr<Term>(new Term());
  t->kind_ = TermKind::ZeroLike;
  t->name_ = std::move(name);
  t->ground_ = false;
  return t;
}

size_t Term::size() const {
  size_t n = 1;
  for (const auto &c : children_)
    n += c->size();
  return n;
}

bool struct_eq(const Term &a, const Term &b) {
  if (a.kind() != b.kind())
    return false;
  switch (a.kind()) {
  case TermKind::Constant:
    if (!(a.value() == b.value()))
      return false;
    break;
  case TermKind::Parameter:
  case TermKind::Leaf:
    if (a.index() != b.index() || !(a.stamp() == b.stamp()))
      return false;
    break;
  case TermKind::Unary:
    if (a.unary_op() != b.unary_op())
      return false;
    break;
  case TermKind::Binary:
    if (a.binary_op() != b.binary_op())
      return false;
    break;
  case TermKind::Conditional:
    break;
  case TermKind::MetaVar:
  case TermKind::ConstMetaVar:
  case TermKind::ZeroLike:
    if (a.var_name() != b.var_name())
      return false;
    break;
  }
  if (a.num_children() != b.num_children())
    return false;
  for (size_t i = 0; i < a.num_children(); ++i)
    if (!struct_eq(*a.child(i), *b.child(i)))
      return false;
  return true;
}

static void collect_vars_into(const Term &t, std::vector<std::string> &out) {
  switch (t.kind()) {
  case TermKind::MetaVar:
  case TermKind::ConstMetaVar:
  case TermKind::ZeroLike:
    if (std::find(out.begin(), out.end(), t.var_name()) == out.end())
      out.push_back(t.var_name());
    return;
  default:
    for (const auto &c : t.children())
      collect_vars_into(*c, out);
  }
}

std::vector<std::string> collect_vars(const Term &t) {
  std::vector<std::string> out;
  collect_vars_into(t, out);
  return out;
}

std::string EvalContext::to_string() const {
  std::string s = "params=[";
  for (size_t i = 0; i < params.size(); ++i) {
    if (i)
      s += ", ";
    s += params[i].to_string();
  }
  s += "] state={";
  bool first = true;
  for (const auto &[id, v] : method_state) {
    if (!first)
      s += ", ";
    first = false;
    s += std::to_string(id) + ": " + v.to_string();
  }
  s += "}";
  return s;
}

const char *to_string(UndefReason r) {
  switch (r) {
  case UndefReason::BadIndex:
    return "BadIndex";
  case UndefReason::MissingLeaf:
    return "MissingLeaf";
  case UndefReason::StampViolation:
    return "StampViolation";
  case UndefReason::TypeMismatch:
    return "TypeMismatch";
  case UndefReason::BadCondition:
    return "BadCondition";
  }
  return "?";
}

std::string EvalResult::to_string() const {
  if (defined_)
    return value_.to_string();
  return std::string("undefined(") + canon::to_string(reason_) + ")";
}

EvalResult evaluate(const EvalContext &ctx, const Term &e) {
  assert(e.is_ground() && "only ground terms evaluate");
  switch (e.kind()) {
  case TermKind::Constant:
    return EvalResult::ok(e.value());

  case TermKind::Parameter: {
    if (e.index() >= ctx.params.size())
      return EvalResult::not_defined(UndefReason::BadIndex);
    const Value &v = ctx.params[e.index()];
    if (!valid_value(v, e.stamp()))
      return EvalResult::not_defined(UndefReason::StampViolation);
    return EvalResult::ok(v);
  }

  case TermKind::Leaf: {
    auto it = ctx.method_state.find(e.index());
    if (it == ctx.method_state.end())
      return EvalResult::not_defined(UndefReason::MissingLeaf);
    if (!valid_value(it->second, e.stamp()))
      return EvalResult::not_defined(UndefReason::StampViolation);
    return EvalResult::ok(it->second);
  }

  case TermKind::Unary: {
    EvalResult a = evaluate(ctx, *e.child(0));
    if (!a.defined())
      return a;
    Value v = unary_eval(e.unary_op(), a.value());
    if (v.is_undef())
      return EvalResult::not_defined(UndefReason::TypeMismatch);
    return EvalResult::ok(v);
  }

  case TermKind::Binary: {
    EvalResult a = evaluate(ctx, *e.child(0));
    if (!a.defined())
      return a;
    EvalResult b = evaluate(ctx, *e.child(1));
    if (!b.defined())
      return b;
    Value v = bin_eval(e.binary_op(), a.value(), b.value());
    if (v.is_undef())
      return EvalResult::not_defined(UndefReason::TypeMismatch);
    return EvalResult::ok(v);
  }

  case TermKind::Conditional: {
    EvalResult c = evaluate(ctx, *e.child(0));
    if (!c.defined())
      return c;
    if (!c.value().is_bool32())
      return EvalResult::not_defined(UndefReason::BadCondition);
    // Only the selected branch is evaluated.
    return evaluate(ctx, *e.child(c.value().bits() == 1 ? 1 : 2));
  }

  default:
    break;
  }
  return EvalResult::not_defined(UndefReason::TypeMismatch);
}

Stamp infer_stamp(const Term &e) {
  switch (e.kind()) {
  case TermKind::Constant:
    return constant_as_stamp(e.value());
  case TermKind::Parameter:
  case TermKind::Leaf:
    return e.stamp();

  case TermKind::Unary: {
    if (e.unary_op() == UnaryOp::LogicNegate)
      return Stamp::integer(32, 0, 1);
    Stamp a = infer_stamp(*e.child(0));
    if (!a.is_integer())
      return Stamp::illegal();
    return Stamp::integer_full(a.width());
  }

  case TermKind::Binary: {
    Stamp l = infer_stamp(*e.child(0));
    Stamp r = infer_stamp(*e.child(1));
    if (!l.is_integer() || !r.is_integer())
      return Stamp::illegal();
    // The shift amount operand is exempt from width agreement.
    if (!is_shift(e.binary_op()) && l.width() != r.width())
      return Stamp::illegal();
    if (is_comparison(e.binary_op()))
      return Stamp::integer(32, 0, 1);
    return Stamp::integer_full(l.width());
  }

  case TermKind::Conditional: {
    Stamp t = infer_stamp(*e.child(1));
    Stamp f = infer_stamp(*e.child(2));
    if (!t.is_integer() || !f.is_integer() || t.width() != f.width())
      return Stamp::illegal();
    return Stamp::integer(t.width(), std::min(t.lo(), f.lo()),
                          std::max(t.hi(), f.hi()));
  }

  default:
    return Stamp::illegal();
  }
}

namespace {

// Java-style precedence levels; higher binds tighter.
int precedence(const Term &t) {
  switch (t.kind()) {
  case TermKind::Conditional:
    return 1;
  case TermKind::Binary:
    switch (t.binary_op()) {
    case BinaryOp::Or:
      return 2;
    case BinaryOp::Xor:
      return 3;
    case BinaryOp::And:
      return 4;
    case BinaryOp::IntegerEquals:
      return 5;
    case BinaryOp::IntegerLessThan:
      return 6;
    case BinaryOp::LeftShift:
    case BinaryOp::RightShiftSigned:
    case BinaryOp::RightShiftUnsigned:
      return 7;
    case BinaryOp::Add:
    case BinaryOp::Sub:
      return 8;
    case BinaryOp::Mul:
      return 9;
    }
    return 8;
  case TermKind::Unary:
    return 10;
  default:
    return 11;
  }
}

const char *binary_symbol(BinaryOp op) {
  switch (op) {
  case BinaryOp::Add:
    return "+";
  case BinaryOp::Sub:
    return "-";
  case BinaryOp::Mul:
    return "*";
  case BinaryOp::And:
    return "&";
  case BinaryOp::Or:
    return "|";
  case BinaryOp::Xor:
    return "^";
  case BinaryOp::LeftShift:
    return "<<";
  case BinaryOp::RightShiftSigned:
    return ">>";
  case BinaryOp::RightShiftUnsigned:
    return ">>>";
  case BinaryOp::IntegerLessThan:
    return "<";
  case BinaryOp::IntegerEquals:
    return "==";
  }
  return "?";
}

void render(const Term &t, int min_prec, std::string &out) {
  int p = precedence(t);
  bool parens = p < min_prec;
  if (parens)
    out += "(";
  switch (t.kind()) {
  case TermKind::Constant:
    out += "const " + t.value().to_string();
    break;
  case TermKind::Parameter:
    out += "p" + std::to_string(t.index()) + ":" + t.stamp().to_string();
    break;
  case TermKind::Leaf:
    out += "leaf " + std::to_string(t.index()) + ":" + t.stamp().to_string();
    break;
  case TermKind::Unary:
    if (t.unary_op() == UnaryOp::Abs) {
      out += "abs(";
      render(*t.child(0), 0, out);
      out += ")";
    } else {
      out += t.unary_op() == UnaryOp::Neg   ? "-"
             : t.unary_op() == UnaryOp::Not ? "~"
                                            : "!";
      render(*t.child(0), 10, out);
    }
    break;
  case TermKind::Binary:
    render(*t.child(0), p, out);
    out += " ";
    out += binary_symbol(t.binary_op());
    out += " ";
    render(*t.child(1), p + 1, out);
    break;
  case TermKind::Conditional:
    render(*t.child(0), 2, out);
    out += " ? ";
    render(*t.child(1), 1, out);
    out += " : ";
    render(*t.child(2), 1, out);
    break;
  case TermKind::MetaVar:
    out += t.var_name();
    break;
  case TermKind::ConstMetaVar:
    out += "const " + t.var_name();
    break;
  case TermKind::ZeroLike:
    out += "zero_like(" + t.var_name() + ")";
    break;
  }
  if (parens)
    out += ")";
}

} // namespace

std::string to_dsl(const Term &e) {
  std::string out;
  render(e, 0, out);
  return out;
}

} // namespace canon
