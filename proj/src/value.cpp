//===- value.cpp - Fixed-width machine word semantics ---------------------===//
//
// Part of the termcanon project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "canon/value.hpp"

namespace canon {

const char *to_string(UnaryOp op) {
  switch (op) {
  case UnaryOp::Neg:
    return "Neg";
  case UnaryOp::Abs:
    return "Abs";
  case UnaryOp::Not:
    return "Not";
  case UnaryOp::LogicNegate:
    return "LogicNegate";
  }
  return "?";
}

const char *to_string(BinaryOp op) {
  switch (op) {
  case BinaryOp::Add:
    return "Add";
  case BinaryOp::Sub:
    return "Sub";
  case BinaryOp::Mul:
    return "Mul";
  case BinaryOp::And:
    return "And";
  case BinaryOp::Or:
    return "Or";
  case BinaryOp::Xor:
    return "Xor";
  case BinaryOp::LeftShift:
    return "LeftShift";
  case BinaryOp::RightShiftSigned:
    return "RightShiftSigned";
  case BinaryOp::RightShiftUnsigned:
    return "RightShiftUnsigned";
  case BinaryOp::IntegerLessThan:
    return "IntegerLessThan";
  case BinaryOp::IntegerEquals:
    return "IntegerEquals";
  }
  return "?";
}

std::string Value::to_string() const {
  if (is_undef())
    return "undef";
  return "i" + std::to_string(width_) + " " + std::to_string(as_signed());
}

std::string Stamp::to_string() const {
  switch (kind_) {
  case Kind::Void:
    return "void";
  case Kind::Illegal:
    return "illegal";
  case Kind::Integer:
    break;
  }
  std::string s = "i" + std::to_string(width_);
  if (!is_full_range())
    s += "[" + std::to_string(lo_) + "," + std::to_string(hi_) + "]";
  return s;
}

Value unary_eval(UnaryOp op, const Value &v) {
  if (v.is_undef())
    return Value::undef();
  unsigned w = v.width();
  switch (op) {
  case UnaryOp::Neg:
    return Value::of(w, ~v.bits() + 1);
  case UnaryOp::Abs:
    // Negative values are negated modulo 2^w, so Abs(min) = min.
    return v.as_signed() < 0 ? Value::of(w, ~v.bits() + 1) : v;
  case UnaryOp::Not:
    return Value::of(w, ~v.bits());
  case UnaryOp::LogicNegate:
    if (!v.is_bool32())
      return Value::undef();
    return Value::bool32(v.bits() == 0);
  }
  return Value::undef();
}

Value bin_eval(BinaryOp op, const Value &a, const Value &b) {
  if (a.is_undef() || b.is_undef())
    return Value::undef();

  if (is_shift(op)) {
    // The amount operand may have any width; it is read unsigned, and
    // amounts >= the result width are undefined rather than wrapped.
    unsigned w = a.width();
    uint64_t amount = b.bits();
    if (amount >= w)
      return Value::undef();
    switch (op) {
    case BinaryOp::LeftShift:
      return Value::of(w, a.bits() << amount);
    case BinaryOp::RightShiftUnsigned:
      return Value::of(w, a.bits() >> amount);
    case BinaryOp::RightShiftSigned:
      return Value::of_signed(w, a.as_signed() >> amount);
    default:
      break;
    }
    return Value::undef();
  }

  if (a.width() != b.width())
    return Value::undef();
  unsigned w = a.width();
  switch (op) {
  case BinaryOp::Add:
    return Value::of(w, a.bits() + b.bits());
  case BinaryOp::Sub:
    return Value::of(w, a.bits() - b.bits());
  case BinaryOp::Mul:
    return Value::of(w, a.bits() * b.bits());
  case BinaryOp::And:
    return Value::of(w, a.bits() & b.bits());
  case BinaryOp::Or:
    return Value::of(w, a.bits() | b.bits());
  case BinaryOp::Xor:
    return Value::of(w, a.bits() ^ b.bits());
  case BinaryOp::IntegerLessThan:
    return Value::bool32(a.as_signed() < b.as_signed());
  case BinaryOp::IntegerEquals:
    return Value::bool32(a.bits() == b.bits());
  default:
    break;
  }
  return Value::undef();
}

bool valid_value(const Value &v, const Stamp &s) {
  if (v.is_undef() || !s.is_integer())
    return false;
  if (v.width() != s.width())
    return false;
  int64_t x = v.as_signed();
  return s.lo() <= x && x <= s.hi();
}

bool stamp_under(const Stamp &a, const Stamp &b) {
  return a.is_integer() && b.is_integer() && a.width() == b.width() &&
         a.hi() < b.lo();
}

Stamp constant_as_stamp(const Value &v) {
  if (v.is_undef())
    return Stamp::illegal();
  int64_t x = v.as_signed();
  return Stamp::integer(v.width(), x, x);
}

} // namespace canon
