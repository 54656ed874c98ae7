#pragma once

#include "lop/padic.hpp"

namespace lop {

// Quadratic unramified extension K_p = Q_p(w) with w^2 + c1*w + c0 = 0,
// the polynomial being irreducible mod p.
struct QuadraticField {
  unsigned p = 0;
  long c1 = 0;
  long c0 = 0;

  // Conway polynomial for the small primes, otherwise the lexicographically
  // first primitive quadratic.
  static QuadraticField standard(unsigned p);
  static QuadraticField with_polynomial(unsigned p, long c1, long c0);
  // Residue of w generates F_{p^2}^x.
  bool root_is_primitive() const;
  bool operator==(const QuadraticField& o) const { return p == o.p && c1 == o.c1 && c0 == o.c0; }
};

// a + b*w.
class UnramifiedElement {
 public:
  UnramifiedElement() = default;
  UnramifiedElement(const QuadraticField& field, PadicNumber a, PadicNumber b)
      : field_(field), a_(std::move(a)), b_(std::move(b)) {}
  static UnramifiedElement from_base(const QuadraticField& field, const PadicNumber& a);
  static UnramifiedElement generator(const QuadraticField& field, long precision);

  const QuadraticField& field() const { return field_; }
  const PadicNumber& a() const { return a_; }
  const PadicNumber& b() const { return b_; }
  unsigned prime() const { return field_.p; }
  long valuation() const;
  long precision() const;
  bool is_zero() const { return a_.is_zero() && b_.is_zero(); }

  UnramifiedElement operator-() const { return {field_, -a_, -b_}; }
  UnramifiedElement operator+(const UnramifiedElement& o) const;
  UnramifiedElement operator-(const UnramifiedElement& o) const;
  UnramifiedElement operator*(const UnramifiedElement& o) const;
  UnramifiedElement operator*(const PadicNumber& s) const { return {field_, a_ * s, b_ * s}; }
  UnramifiedElement operator/(const UnramifiedElement& o) const { return *this * o.inverse(); }
  UnramifiedElement& operator+=(const UnramifiedElement& o) { return *this = *this + o; }
  UnramifiedElement& operator*=(const UnramifiedElement& o) { return *this = *this * o; }

  UnramifiedElement conjugate() const;
  PadicNumber norm() const;
  PadicNumber trace() const;
  UnramifiedElement inverse() const;
  UnramifiedElement pow(const mpz_class& e) const;
  UnramifiedElement shifted(long e) const { return {field_, a_.shifted(e), b_.shifted(e)}; }
  UnramifiedElement with_precision(long cap) const {
    return {field_, a_.with_precision(cap), b_.with_precision(cap)};
  }

  std::string to_string() const;

 private:
  QuadraticField field_;
  PadicNumber a_, b_;
};

// log_p with log_p(p) = 0, trivial on roots of unity.
UnramifiedElement iwasawa_log(const UnramifiedElement& x);
PadicNumber iwasawa_log(const PadicNumber& x);

// Tr_{K_p/Q_p}(x) / 2.
PadicNumber half_trace(const UnramifiedElement& x);

// Teichmuller representative of the residue of a unit x.
UnramifiedElement teichmuller(const UnramifiedElement& x);

}  // namespace lop
