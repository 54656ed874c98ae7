#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "lop/errors.hpp"

namespace lop {

// p^e as a GMP integer, cached per thread.
const mpz_class& prime_power(unsigned p, long e);

// Number of times p divides n (n != 0).
long valuation_of(unsigned p, const mpz_class& n);
long valuation_of(unsigned p, const mpq_class& q);

// Element of Q_p known modulo p^precision:  p^valuation * unit.
// The zero of precision M (written O(p^M)) has unit 0 and valuation M.
class PadicNumber {
 public:
  PadicNumber() = default;

  static PadicNumber zero(unsigned p, long precision);
  static PadicNumber from_integer(unsigned p, const mpz_class& n, long precision);
  static PadicNumber from_integer(unsigned p, long n, long precision) {
    return from_integer(p, mpz_class(n), precision);
  }
  static PadicNumber from_rational(unsigned p, const mpq_class& q, long precision);
  // p^valuation * unit with unit taken modulo p^(precision - valuation).
  static PadicNumber from_parts(unsigned p, long valuation, const mpz_class& unit, long precision);

  unsigned prime() const { return p_; }
  long valuation() const { return val_; }
  long precision() const { return prec_; }
  long relative_precision() const { return prec_ - val_; }
  const mpz_class& unit() const { return unit_; }
  bool is_zero() const { return unit_ == 0; }
  bool is_unit() const { return !is_zero() && val_ == 0; }

  PadicNumber operator-() const;
  PadicNumber operator+(const PadicNumber& o) const;
  PadicNumber operator-(const PadicNumber& o) const;
  PadicNumber operator*(const PadicNumber& o) const;
  PadicNumber operator/(const PadicNumber& o) const;
  PadicNumber& operator+=(const PadicNumber& o) { return *this = *this + o; }
  PadicNumber& operator-=(const PadicNumber& o) { return *this = *this - o; }
  PadicNumber& operator*=(const PadicNumber& o) { return *this = *this * o; }
  PadicNumber& operator/=(const PadicNumber& o) { return *this = *this / o; }

  // Multiplication by an exact integer / power of p.
  PadicNumber mul_integer(const mpz_class& n) const;
  PadicNumber shifted(long e) const;  // times p^e
  PadicNumber inverse() const;
  PadicNumber pow(long e) const;

  // Lower the absolute precision to min(precision, cap).
  PadicNumber with_precision(long cap) const;

  // Integer representative in [0, p^precision); requires valuation >= 0.
  mpz_class lift() const;
  // p^valuation * unit as a rational number.
  mpq_class to_rational() const;

  // Agreement modulo p^m (m clipped to the precision of both).
  bool equals_mod(const PadicNumber& o, long m) const;
  // Agreement at the common precision.
  bool operator==(const PadicNumber& o) const;

  // Base-p digits from valuation up to precision-1.
  std::vector<unsigned> digits() const;
  // "1 + 3^2 + 2*3^7 + O(3^10)"
  std::string to_string() const;

 private:
  void normalize();

  unsigned p_ = 0;
  long val_ = 0;
  long prec_ = 0;
  mpz_class unit_;
};

}  // namespace lop
