//===- value.hpp - Fixed-width machine words and stamps ---------*- C++ -*-===//
//
// Part of the termcanon project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#ifndef CANON_VALUE_HPP
#define CANON_VALUE_HPP

#include <cassert>
#include <cstdint>
#include <string>

namespace canon {

enum class UnaryOp : uint8_t { Neg, Abs, Not, LogicNegate };

enum class BinaryOp : uint8_t {
  Add,
  Sub,
  Mul,
  And,
  Or,
  Xor,
  LeftShift,
  RightShiftSigned,
  RightShiftUnsigned,
  IntegerLessThan,
  IntegerEquals,
};

const char *to_string(UnaryOp op);
const char *to_string(BinaryOp op);

inline bool is_shift(BinaryOp op) {
  return op == BinaryOp::LeftShift || op == BinaryOp::RightShiftSigned ||
         op == BinaryOp::RightShiftUnsigned;
}

inline bool is_comparison(BinaryOp op) {
  return op == BinaryOp::IntegerLessThan || op == BinaryOp::IntegerEquals;
}

/// Mask keeping only the low `width` bits. Width must be in 1..64.
inline uint64_t mask_bits(unsigned width, uint64_t bits) {
  assert(width >= 1 && width <= 64);
  return width == 64 ? bits : (bits & ((uint64_t{1} << width) - 1));
}

/// Smallest/largest signed values representable at a given width.
/// At width 1 the signed range is {-1, 0}.
inline int64_t min_signed(unsigned width) {
  assert(width >= 1 && width <= 64);
  return width == 64 ? INT64_MIN : -(int64_t)(uint64_t{1} << (width - 1));
}

inline int64_t max_signed(unsigned width) {
  assert(width >= 1 && width <= 64);
  return (int64_t)((uint64_t{1} << (width - 1)) - 1);
}

/// A runtime value: either undefined, or a machine word of 1..64 bits.
/// For defined values only the low `width` bits are significant; the
/// remaining bits are kept zero. Undefined is the universal "this
/// operation does not apply" result, not an error.
class Value {
public:
  Value() = default; // undefined

  static Value undef() { return Value(); }

  static Value of(unsigned width, uint64_t bits) {
    assert(width >= 1 && width <= 64);
    Value v;
    v.width_ = (uint8_t)width;
    v.bits_ = mask_bits(width, bits);
    return v;
  }

  static Value of_signed(unsigned width, int64_t x) {
    return of(width, (uint64_t)x);
  }

  /// The 0/1-valued 32-bit encoding used for comparison results and
  /// conditional inputs.
  static Value bool32(bool b) { return of(32, b ? 1 : 0); }

  bool is_undef() const { return width_ == 0; }
  unsigned width() const {
    assert(!is_undef());
    return width_;
  }
  uint64_t bits() const {
    assert(!is_undef());
    return bits_;
  }

  /// Two's-complement interpretation of the low `width` bits.
  int64_t as_signed() const {
    assert(!is_undef());
    if (width_ == 64)
      return (int64_t)bits_;
    uint64_t sign = uint64_t{1} << (width_ - 1);
    return (bits_ & sign) ? (int64_t)(bits_ | ~mask_bits(width_, ~uint64_t{0}))
                          : (int64_t)bits_;
  }

  bool is_bool32() const {
    return !is_undef() && width_ == 32 && bits_ <= 1;
  }

  friend bool operator==(const Value &, const Value &) = default;

  /// Rendered as `i<width> <signed-decimal>` (e.g. `i8 -1`), or `undef`.
  std::string to_string() const;

private:
  uint8_t width_ = 0; // 0 encodes undefined
  uint64_t bits_ = 0;
};

/// Static type information attached to IR nodes: bit width plus signed
/// lower/upper bounds for integer values.
class Stamp {
public:
  enum class Kind : uint8_t { Integer, Void, Illegal };

  Stamp() : kind_(Kind::Illegal) {}

  static Stamp integer(unsigned width, int64_t lo, int64_t hi) {
    assert(width >= 1 && width <= 64);
    assert(lo <= hi);
    assert(lo >= min_signed(width) && hi <= max_signed(width));
    Stamp s;
    s.kind_ = Kind::Integer;
    s.width_ = (uint8_t)width;
    s.lo_ = lo;
    s.hi_ = hi;
    return s;
  }

  static Stamp integer_full(unsigned width) {
    return integer(width, min_signed(width), max_signed(width));
  }

  static Stamp void_stamp() {
    Stamp s;
    s.kind_ = Kind::Void;
    return s;
  }

  static Stamp illegal() { return Stamp(); }

  Kind kind() const { return kind_; }
  bool is_integer() const { return kind_ == Kind::Integer; }

  unsigned width() const {
    assert(is_integer());
    return width_;
  }
  int64_t lo() const {
    assert(is_integer());
    return lo_;
  }
  int64_t hi() const {
    assert(is_integer());
    return hi_;
  }

  bool is_full_range() const {
    return is_integer() && lo_ == min_signed(width_) && hi_ == max_signed(width_);
  }

  friend bool operator==(const Stamp &, const Stamp &) = default;

  /// `i32`, `i8[0,5]`, `void`, or `illegal`.
  std::string to_string() const;

private:
  Kind kind_;
  uint8_t width_ = 0;
  int64_t lo_ = 0;
  int64_t hi_ = 0;
};

/// Apply a unary operator. Total: ill-typed or undefined input yields
/// undefined. Results wrap modulo 2^width; Abs(minimum) wraps to itself.
Value unary_eval(UnaryOp op, const Value &v);

/// Apply a binary operator. Total. Non-shift operators require equal
/// operand widths; the shift amount may have any width and is read
/// unsigned, with amounts >= the result width yielding undefined.
/// Comparisons yield the 0/1-valued 32-bit encoding.
Value bin_eval(BinaryOp op, const Value &a, const Value &b);

/// True iff v is a defined word whose width matches the integer stamp
/// and whose signed interpretation lies in [lo, hi].
bool valid_value(const Value &v, const Stamp &s);

/// True iff both stamps are integers of equal width and a's upper bound
/// is below b's lower bound.
bool stamp_under(const Stamp &a, const Stamp &b);

/// Singleton stamp for a constant; undefined input yields the illegal stamp.
Stamp constant_as_stamp(const Value &v);

} // namespace canon

#endif // CANON_VALUE_HPP
