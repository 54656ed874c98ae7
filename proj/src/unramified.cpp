#include "lop/unramified.hpp"

#include <algorithm>
#include <map>

namespace lop {

namespace {

// Multiplication in F_p[w]/(w^2 + c1 w + c0).
std::pair<long, long> residue_mul(const QuadraticField& F, std::pair<long, long> x, std::pair<long, long> y) {
  long p = F.p;
  long a = x.first * y.first - F.c0 * x.second * y.second;
  long b = x.first * y.second + x.second * y.first - F.c1 * x.second * y.second;
  a %= p;
  b %= p;
  if (a < 0) a += p;
  if (b < 0) b += p;
  return {a, b};
}

bool irreducible_mod_p(unsigned p, long c1, long c0) {
  for (long x = 0; x < static_cast<long>(p); ++x) {
    long v = ((x * x + c1 * x + c0) % static_cast<long>(p) + p) % p;
    if (v == 0) return false;
  }
  return true;
}

}  // namespace

bool QuadraticField::root_is_primitive() const {
  long order = static_cast<long>(p) * p - 1;
  std::pair<long, long> w{0, 1};
  std::pair<long, long> x{1, 0};
  for (long e = 1; e <= order; ++e) {
    x = residue_mul(*this, x, w);
    if (x.first == 1 && x.second == 0) return e == order;
  }
  return false;
}

QuadraticField QuadraticField::with_polynomial(unsigned p, long c1, long c0) {
  if (!irreducible_mod_p(p, c1, c0)) throw DomainError("defining polynomial is reducible mod p");
  QuadraticField F;
  F.p = p;
  F.c1 = c1;
  F.c0 = c0;
  return F;
}

QuadraticField QuadraticField::standard(unsigned p) {
  static const std::map<unsigned, std::pair<long, long>> conway = {
      {2, {1, 1}}, {3, {2, 2}}, {5, {4, 2}}, {7, {6, 3}}, {11, {7, 2}}, {13, {12, 2}}};
  auto it = conway.find(p);
  if (it != conway.end()) {
    QuadraticField F = with_polynomial(p, it->second.first, it->second.second);
    if (F.root_is_primitive()) return F;
  }
  for (long c1 = 0; c1 < static_cast<long>(p); ++c1)
    for (long c0 = 1; c0 < static_cast<long>(p); ++c0)
      if (irreducible_mod_p(p, c1, c0)) {
        QuadraticField F = with_polynomial(p, c1, c0);
        if (F.root_is_primitive()) return F;
      }
  throw DomainError("no primitive quadratic found");
}

UnramifiedElement UnramifiedElement::from_base(const QuadraticField& field, const PadicNumber& a) {
  return {field, a, PadicNumber::zero(field.p, a.precision() + std::max(0L, -a.valuation()) + 1000)};
}

UnramifiedElement UnramifiedElement::generator(const QuadraticField& field, long precision) {
  return {field, PadicNumber::zero(field.p, precision), PadicNumber::from_integer(field.p, 1, precision)};
}

long UnramifiedElement::valuation() const { return std::min(a_.valuation(), b_.valuation()); }
long UnramifiedElement::precision() const { return std::min(a_.precision(), b_.precision()); }

UnramifiedElement UnramifiedElement::operator+(const UnramifiedElement& o) const {
  return {field_, a_ + o.a_, b_ + o.b_};
}

UnramifiedElement UnramifiedElement::operator-(const UnramifiedElement& o) const {
  return {field_, a_ - o.a_, b_ - o.b_};
}

UnramifiedElement UnramifiedElement::operator*(const UnramifiedElement& o) const {
  PadicNumber bb = b_ * o.b_;
  PadicNumber a = a_ * o.a_ - bb.mul_integer(field_.c0);
  PadicNumber b = a_ * o.b_ + b_ * o.a_ - bb.mul_integer(field_.c1);
  return {field_, a, b};
}

UnramifiedElement UnramifiedElement::conjugate() const {
  // w -> -c1 - w
  return {field_, a_ - b_.mul_integer(field_.c1), -b_};
}

PadicNumber UnramifiedElement::norm() const {
  return a_ * a_ - (a_ * b_).mul_integer(field_.c1) + (b_ * b_).mul_integer(field_.c0);
}

PadicNumber UnramifiedElement::trace() const { return a_.mul_integer(2) - b_.mul_integer(field_.c1); }

UnramifiedElement UnramifiedElement::inverse() const {
  PadicNumber n = norm();
  if (n.is_zero()) throw PrecisionError("inverse of an element of K_p indistinguishable from 0");
  UnramifiedElement c = conjugate();
  PadicNumber ni = n.inverse();
  return {field_, c.a_ * ni, c.b_ * ni};
}

UnramifiedElement UnramifiedElement::pow(const mpz_class& e) const {
  if (e < 0) return inverse().pow(-e);
  long prec = std::max(1L, precision() - valuation());
  UnramifiedElement result{field_, PadicNumber::from_integer(field_.p, 1, prec), PadicNumber::zero(field_.p, prec + 1000)};
  if (e == 0) return result;
  UnramifiedElement base = *this;
  bool first = true;
  std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (std::size_t i = 0; i < bits; ++i) {
    if (mpz_tstbit(e.get_mpz_t(), i)) {
      result = first ? base : result * base;
      first = false;
    }
    if (i + 1 < bits) base = base * base;
  }
  return result;
}

std::string UnramifiedElement::to_string() const {
  return "(" + a_.to_string() + ") + (" + b_.to_string() + ")*w";
}

UnramifiedElement iwasawa_log(const UnramifiedElement& x) {
  const unsigned p = x.prime();
  if (x.is_zero()) throw PrecisionError("iwasawa_log of an element indistinguishable from 0");
  long v = x.valuation();
  UnramifiedElement u = x.shifted(-v);
  long R = u.precision();
  mpz_class e = mpz_class(p) * p - 1;
  UnramifiedElement w = u.pow(e);
  UnramifiedElement one{x.field(), PadicNumber::from_integer(p, 1, R), PadicNumber::zero(p, R)};
  UnramifiedElement z = w - one;
  UnramifiedElement sum{x.field(), PadicNumber::zero(p, R), PadicNumber::zero(p, R)};
  if (z.is_zero()) return sum;
  long vz = z.valuation();
  // log(1+z) = sum (-1)^{i+1} z^i / i, terms of valuation >= i*vz - log_p(i)
  UnramifiedElement zi = z;
  for (long i = 1;; ++i) {
    long vi = valuation_of(p, mpz_class(i));
    long floor_log = 0;
    for (long q = i; q >= static_cast<long>(p); q /= p) ++floor_log;
    // i*vz - floor(log_p i) is increasing, so later terms vanish too
    if (i * vz - floor_log >= R) break;
    PadicNumber inv_i = PadicNumber::from_integer(p, 1, R + vi + 2) / PadicNumber::from_integer(p, i, R + vi + 2);
    UnramifiedElement term = zi * inv_i;
    if (i % 2 == 0) term = -term;
    sum = sum + term;
    zi = zi * z;
  }
  PadicNumber denom = PadicNumber::from_integer(p, e, R + 2);
  UnramifiedElement res = sum * denom.inverse();
  return res.with_precision(R);
}

PadicNumber iwasawa_log(const PadicNumber& x) {
  QuadraticField F = QuadraticField::standard(x.prime());
  return iwasawa_log(UnramifiedElement::from_base(F, x)).a();
}

PadicNumber half_trace(const UnramifiedElement& x) {
  PadicNumber t = x.trace();
  PadicNumber two = PadicNumber::from_integer(x.prime(), 2, t.precision() + 2);
  return t / two;
}

UnramifiedElement teichmuller(const UnramifiedElement& x) {
  if (x.valuation() != 0) throw DomainError("teichmuller: argument is not a unit");
  long R = x.precision();
  mpz_class q = mpz_class(x.prime()) * x.prime();
  UnramifiedElement t = x;
  for (long i = 0; i <= R; ++i) t = t.pow(q);
  return t.with_precision(R);
}

}  // namespace lop
