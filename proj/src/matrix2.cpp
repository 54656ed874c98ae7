#include "lop/matrix2.hpp"

#include <algorithm>
#include <sstream>

namespace lop {

std::string IMat2::to_string() const {
  std::ostringstream os;
  os << "[[" << e[0] << "," << e[1] << "],[" << e[2] << "," << e[3] << "]]";
  return os.str();
}

PMat2 PMat2::identity(unsigned p, long precision) {
  auto one = PadicNumber::from_integer(p, 1, precision);
  auto zero = PadicNumber::zero(p, precision);
  return {one, zero, zero, one};
}

PMat2 PMat2::from_integer(unsigned p, const IMat2& m, long precision) {
  return {PadicNumber::from_integer(p, m.e[0], precision), PadicNumber::from_integer(p, m.e[1], precision),
          PadicNumber::from_integer(p, m.e[2], precision), PadicNumber::from_integer(p, m.e[3], precision)};
}

PMat2 PMat2::from_rationals(unsigned p, const mpq_class& a, const mpq_class& b, const mpq_class& c,
                            const mpq_class& d, long precision) {
  return {PadicNumber::from_rational(p, a, precision), PadicNumber::from_rational(p, b, precision),
          PadicNumber::from_rational(p, c, precision), PadicNumber::from_rational(p, d, precision)};
}

PMat2 PMat2::operator*(const PMat2& o) const {
  return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
}

PMat2 PMat2::inverse() const {
  PadicNumber di = det().inverse();
  return adjugate().scaled(di);
}

long PMat2::precision() const { return std::min({a.precision(), b.precision(), c.precision(), d.precision()}); }

long PMat2::min_valuation() const {
  return std::min({a.valuation(), b.valuation(), c.valuation(), d.valuation()});
}

std::string PMat2::to_string() const {
  return "[[" + a.to_string() + ", " + b.to_string() + "], [" + c.to_string() + ", " + d.to_string() + "]]";
}

PMat2 operator*(const IMat2& m, const PMat2& g) {
  return {g.a.mul_integer(m.e[0]) + g.c.mul_integer(m.e[1]), g.b.mul_integer(m.e[0]) + g.d.mul_integer(m.e[1]),
          g.a.mul_integer(m.e[2]) + g.c.mul_integer(m.e[3]), g.b.mul_integer(m.e[2]) + g.d.mul_integer(m.e[3])};
}

PMat2 operator*(const PMat2& g, const IMat2& m) {
  return {g.a.mul_integer(m.e[0]) + g.b.mul_integer(m.e[2]), g.a.mul_integer(m.e[1]) + g.b.mul_integer(m.e[3]),
          g.c.mul_integer(m.e[0]) + g.d.mul_integer(m.e[2]), g.c.mul_integer(m.e[1]) + g.d.mul_integer(m.e[3])};
}

}  // namespace lop
