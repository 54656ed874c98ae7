#include "lop/padic.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>

namespace lop {

const mpz_class& prime_power(unsigned p, long e) {
  if (e < 0) throw DomainError("prime_power: negative exponent");
  thread_local std::map<unsigned, std::deque<mpz_class>> cache;
  auto& v = cache[p];
  if (v.empty()) v.emplace_back(1);
  while (static_cast<long>(v.size()) <= e) v.push_back(v.back() * p);
  return v[e];
}

long valuation_of(unsigned p, const mpz_class& n) {
  if (n == 0) throw DomainError("valuation of zero");
  mpz_class t;
  mpz_class pp(p);
  return static_cast<long>(mpz_remove(t.get_mpz_t(), n.get_mpz_t(), pp.get_mpz_t()));
}

long valuation_of(unsigned p, const mpq_class& q) {
  return valuation_of(p, q.get_num()) - valuation_of(p, q.get_den());
}

static mpz_class mod_pow(const mpz_class& x, unsigned p, long e) {
  mpz_class r = x % prime_power(p, e);
  if (r < 0) r += prime_power(p, e);
  return r;
}

PadicNumber PadicNumber::zero(unsigned p, long precision) {
  PadicNumber z;
  z.p_ = p;
  z.val_ = precision;
  z.prec_ = precision;
  z.unit_ = 0;
  return z;
}

PadicNumber PadicNumber::from_parts(unsigned p, long valuation, const mpz_class& unit, long precision) {
  PadicNumber r;
  r.p_ = p;
  r.val_ = valuation;
  r.prec_ = precision;
  if (valuation >= precision || unit == 0) return zero(p, precision);
  r.unit_ = unit;
  r.normalize();
  return r;
}

PadicNumber PadicNumber::from_integer(unsigned p, const mpz_class& n, long precision) {
  return from_parts(p, 0, n, precision);
}

PadicNumber PadicNumber::from_rational(unsigned p, const mpq_class& q, long precision) {
  if (q == 0) return zero(p, precision);
  mpz_class num = q.get_num(), den = q.get_den();
  long vn = valuation_of(p, num), vd = valuation_of(p, den);
  mpz_class un, ud;
  mpz_class pp(p);
  mpz_remove(un.get_mpz_t(), num.get_mpz_t(), pp.get_mpz_t());
  mpz_remove(ud.get_mpz_t(), den.get_mpz_t(), pp.get_mpz_t());
  long v = vn - vd;
  if (v >= precision) return zero(p, precision);
  const mpz_class& mod = prime_power(p, precision - v);
  mpz_class inv;
  mpz_invert(inv.get_mpz_t(), ud.get_mpz_t(), mod.get_mpz_t());
  return from_parts(p, v, un * inv, precision);
}

void PadicNumber::normalize() {
  if (unit_ == 0 || val_ >= prec_) {
    unit_ = 0;
    val_ = prec_;
    return;
  }
  mpz_class pp(p_);
  mpz_class t;
  long s = static_cast<long>(mpz_remove(t.get_mpz_t(), unit_.get_mpz_t(), pp.get_mpz_t()));
  val_ += s;
  if (val_ >= prec_) {
    unit_ = 0;
    val_ = prec_;
    return;
  }
  unit_ = mod_pow(t, p_, prec_ - val_);
  if (unit_ == 0) {
    val_ = prec_;
  }
}

PadicNumber PadicNumber::operator-() const {
  if (is_zero()) return *this;
  PadicNumber r = *this;
  r.unit_ = prime_power(p_, prec_ - val_) - unit_;
  return r;
}

PadicNumber PadicNumber::operator+(const PadicNumber& o) const {
  long prec = std::min(prec_, o.prec_);
  if (is_zero()) return o.with_precision(prec);
  if (o.is_zero()) return with_precision(prec);
  long v = std::min(val_, o.val_);
  if (v >= prec) return zero(p_, prec);
  mpz_class s = unit_ * prime_power(p_, val_ - v) + o.unit_ * prime_power(p_, o.val_ - v);
  PadicNumber r;
  r.p_ = p_;
  r.val_ = v;
  r.prec_ = prec;
  r.unit_ = mod_pow(s, p_, prec - v);
  r.normalize();
  return r;
}

PadicNumber PadicNumber::operator-(const PadicNumber& o) const { return *this + (-o); }

PadicNumber PadicNumber::operator*(const PadicNumber& o) const {
  long prec = std::min(prec_ + o.val_, o.prec_ + val_);
  if (is_zero() || o.is_zero()) return zero(p_, prec);
  PadicNumber r;
  r.p_ = p_;
  r.val_ = val_ + o.val_;
  r.prec_ = prec;
  r.unit_ = mod_pow(unit_ * o.unit_, p_, prec - r.val_);
  return r;
}

PadicNumber PadicNumber::inverse() const {
  if (is_zero()) throw PrecisionError("inverse of a p-adic number indistinguishable from 0");
  PadicNumber r;
  r.p_ = p_;
  r.val_ = -val_;
  long rel = prec_ - val_;
  r.prec_ = r.val_ + rel;
  mpz_invert(r.unit_.get_mpz_t(), unit_.get_mpz_t(), prime_power(p_, rel).get_mpz_t());
  return r;
}

PadicNumber PadicNumber::operator/(const PadicNumber& o) const {
  if (o.is_zero()) throw PrecisionError("division by a p-adic number indistinguishable from 0");
  if (is_zero()) return zero(p_, prec_ - o.val_);
  return *this * o.inverse();
}

PadicNumber PadicNumber::mul_integer(const mpz_class& n) const {
  if (n == 0) return zero(p_, prec_ + (1L << 20));
  long vn = valuation_of(p_, n);
  if (is_zero()) return zero(p_, prec_ + vn);
  PadicNumber r = *this;
  r.prec_ += vn;
  r.unit_ = unit_ * n;
  r.normalize();
  return r;
}

PadicNumber PadicNumber::shifted(long e) const {
  PadicNumber r = *this;
  r.val_ += e;
  r.prec_ += e;
  return r;
}

PadicNumber PadicNumber::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  if (e == 0) return from_integer(p_, 1, std::max(1L, prec_ - val_));
  PadicNumber result;
  PadicNumber base = *this;
  bool first = true;
  while (e > 0) {
    if (e & 1) {
      result = first ? base : result * base;
      first = false;
    }
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

PadicNumber PadicNumber::with_precision(long cap) const {
  if (cap >= prec_) return *this;
  if (val_ >= cap || is_zero()) return zero(p_, cap);
  PadicNumber r = *this;
  r.prec_ = cap;
  r.unit_ = mod_pow(unit_, p_, cap - val_);
  return r;
}

mpz_class PadicNumber::lift() const {
  if (is_zero()) return 0;
  if (val_ < 0) throw DomainError("lift of a non-integral p-adic number");
  return unit_ * prime_power(p_, val_);
}

mpq_class PadicNumber::to_rational() const {
  if (is_zero()) return 0;
  if (val_ >= 0) return mpq_class(unit_ * prime_power(p_, val_));
  mpq_class q(unit_, prime_power(p_, -val_));
  q.canonicalize();
  return q;
}

bool PadicNumber::equals_mod(const PadicNumber& o, long m) const {
  long prec = std::min({m, prec_, o.prec_});
  return (*this - o).with_precision(prec).is_zero();
}

bool PadicNumber::operator==(const PadicNumber& o) const {
  return p_ == o.p_ && (*this - o).is_zero();
}

std::vector<unsigned> PadicNumber::digits() const {
  std::vector<unsigned> d;
  if (is_zero()) return d;
  mpz_class u = unit_;
  for (long i = val_; i < prec_; ++i) {
    d.push_back(static_cast<unsigned>(mpz_fdiv_ui(u.get_mpz_t(), p_)));
    u /= p_;
  }
  return d;
}

std::string PadicNumber::to_string() const {
  std::ostringstream os;
  bool first = true;
  if (!is_zero()) {
    auto d = digits();
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (d[i] == 0) continue;
      long e = val_ + static_cast<long>(i);
      if (!first) os << " + ";
      first = false;
      if (e == 0) {
        os << d[i];
      } else {
        if (d[i] != 1) os << d[i] << "*";
        os << p_;
        if (e != 1) os << "^" << e;
      }
    }
  }
  if (!first) os << " + ";
  os << "O(" << p_ << "^" << prec_ << ")";
  return os.str();
}

}  // namespace lop
