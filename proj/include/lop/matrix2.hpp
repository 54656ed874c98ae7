#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "lop/padic.hpp"

namespace lop {

// Integer 2x2 matrix [[a, b], [c, d]].
struct IMat2 {
  std::array<mpz_class, 4> e;

  IMat2() : e{1, 0, 0, 1} {}
  IMat2(mpz_class a, mpz_class b, mpz_class c, mpz_class d) : e{std::move(a), std::move(b), std::move(c), std::move(d)} {}
  const mpz_class& a() const { return e[0]; }
  const mpz_class& b() const { return e[1]; }
  const mpz_class& c() const { return e[2]; }
  const mpz_class& d() const { return e[3]; }
  mpz_class det() const { return e[0] * e[3] - e[1] * e[2]; }
  IMat2 operator*(const IMat2& o) const {
    return {e[0] * o.e[0] + e[1] * o.e[2], e[0] * o.e[1] + e[1] * o.e[3], e[2] * o.e[0] + e[3] * o.e[2],
            e[2] * o.e[1] + e[3] * o.e[3]};
  }
  IMat2 adjugate() const { return {e[3], -e[1], -e[2], e[0]}; }
  bool operator==(const IMat2& o) const { return e == o.e; }
  bool operator<(const IMat2& o) const { return e < o.e; }
  std::string to_string() const;
};

// 2x2 matrix over Q_p.
struct PMat2 {
  PadicNumber a, b, c, d;

  static PMat2 identity(unsigned p, long precision);
  static PMat2 from_integer(unsigned p, const IMat2& m, long precision);
  static PMat2 from_rationals(unsigned p, const mpq_class& a, const mpq_class& b, const mpq_class& c,
                              const mpq_class& d, long precision);
  unsigned prime() const { return a.prime(); }
  PadicNumber det() const { return a * d - b * c; }
  PMat2 operator*(const PMat2& o) const;
  PMat2 operator+(const PMat2& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
  PMat2 scaled(const PadicNumber& s) const { return {a * s, b * s, c * s, d * s}; }
  PMat2 shifted(long e) const { return {a.shifted(e), b.shifted(e), c.shifted(e), d.shifted(e)}; }
  PMat2 adjugate() const { return {d, -b, -c, a}; }
  PMat2 inverse() const;
  long precision() const;
  long min_valuation() const;
  PMat2 with_precision(long cap) const {
    return {a.with_precision(cap), b.with_precision(cap), c.with_precision(cap), d.with_precision(cap)};
  }
  bool equals_mod(const PMat2& o, long m) const {
    return a.equals_mod(o.a, m) && b.equals_mod(o.b, m) && c.equals_mod(o.c, m) && d.equals_mod(o.d, m);
  }
  std::string to_string() const;
};

PMat2 operator*(const IMat2& m, const PMat2& g);
PMat2 operator*(const PMat2& g, const IMat2& m);

}  // namespace lop
