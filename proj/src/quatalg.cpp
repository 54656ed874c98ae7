#include "lop/quatalg.hpp"

#include <algorithm>
#include <stdexcept>

#include "lop/errors.hpp"
#include "lop/padic.hpp"

namespace lop {

std::vector<std::pair<long, int>> factorize(long n) {
  std::vector<std::pair<long, int>> out;
  for (long q = 2; q * q <= n; ++q) {
    int e = 0;
    while (n % q == 0) {
      n /= q;
      ++e;
    }
    if (e) out.emplace_back(q, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

namespace {

// split x = ell^e * u
long strip(mpz_class& x, long ell) {
  long e = 0;
  while (x % ell == 0) {
    x /= ell;
    ++e;
  }
  return e;
}

long mod2(const mpz_class& x) { return mpz_odd_p(x.get_mpz_t()) ? 1 : 0; }

mpz_class mod_positive(const mpz_class& x, const mpz_class& m) {
  mpz_class r;
  mpz_mod(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
  return r;
}

}  // namespace

int hilbert_symbol(const mpz_class& a0, const mpz_class& b0, long ell) {
  if (a0 == 0 || b0 == 0) throw DomainError("hilbert_symbol: zero argument");
  if (ell == 0) return (a0 < 0 && b0 < 0) ? -1 : 1;
  mpz_class u = a0, v = b0;
  long alpha = strip(u, ell), beta = strip(v, ell);
  if (ell == 2) {
    auto eps = [](const mpz_class& x) { return mod2((x - 1) / 2); };
    auto omega = [](const mpz_class& x) { return mod2((x * x - 1) / 8); };
    long e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u);
    return e % 2 ? -1 : 1;
  }
  int s = 1;
  if ((alpha * beta) % 2 == 1 && ((ell - 1) / 2) % 2 == 1) s = -s;
  mpz_class L = ell;
  if (beta % 2) s *= mpz_legendre(u.get_mpz_t(), L.get_mpz_t());
  if (alpha % 2) s *= mpz_legendre(v.get_mpz_t(), L.get_mpz_t());
  return s;
}

QuaternionAlgebra build_algebra(long nminus, unsigned p) {
  if (nminus < 2) throw DomainError("discriminant must be at least 2");
  auto fac = factorize(nminus);
  for (const auto& [q, e] : fac)
    if (e > 1) throw DomainError("discriminant must be squarefree");
  if (fac.size() % 2 == 0) throw DomainError("a definite algebra needs an odd number of finite ramified primes");
  if (nminus % static_cast<long>(p) == 0) throw DomainError("p divides the discriminant");
  for (long s = 2; s < 64 * nminus + 64; ++s) {
    for (long ma = 1; 2 * ma <= s; ++ma) {
      long a = -ma, b = -(s - ma);
      std::vector<long> places{2};
      for (long x : {ma, s - ma, nminus})
        for (const auto& [q, e] : factorize(x)) places.push_back(q);
      std::sort(places.begin(), places.end());
      places.erase(std::unique(places.begin(), places.end()), places.end());
      bool ok = true;
      for (long q : places) {
        bool ramified = hilbert_symbol(a, b, q) == -1;
        if (ramified != (nminus % q == 0)) {
          ok = false;
          break;
        }
      }
      if (ok) return QuaternionAlgebra{a, b, nminus};
    }
  }
  throw DomainError("no quaternion algebra found for this discriminant");
}

RationalQuaternion quaternion_product(const QuaternionAlgebra& B, const RationalQuaternion& x,
                                      const RationalQuaternion& y) {
  const mpq_class a = B.a, b = B.b;
  // i^2 = a, j^2 = b, k^2 = -ab, ij = k, ji = -k, ik = aj, ki = -aj, jk = -bi, kj = bi
  RationalQuaternion z;
  z[0] = x[0] * y[0] + a * x[1] * y[1] + b * x[2] * y[2] - a * b * x[3] * y[3];
  z[1] = x[0] * y[1] + x[1] * y[0] - b * x[2] * y[3] + b * x[3] * y[2];
  z[2] = x[0] * y[2] + x[2] * y[0] + a * x[1] * y[3] - a * x[3] * y[1];
  z[3] = x[0] * y[3] + x[3] * y[0] + x[1] * y[2] - x[2] * y[1];
  return z;
}

RationalQuaternion quaternion_conjugate(const RationalQuaternion& x) { return {x[0], -x[1], -x[2], -x[3]}; }

mpq_class quaternion_norm(const QuaternionAlgebra& B, const RationalQuaternion& x) {
  const mpq_class a = B.a, b = B.b;
  return x[0] * x[0] - a * x[1] * x[1] - b * x[2] * x[2] + a * b * x[3] * x[3];
}

mpq_class quaternion_trace(const RationalQuaternion& x) { return 2 * x[0]; }

namespace {

using RationalMatrix4 = std::array<std::array<mpq_class, 4>, 4>;

std::optional<RationalMatrix4> invert4(RationalMatrix4 m) {
  RationalMatrix4 inv;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) inv[i][j] = i == j ? 1 : 0;
  for (int c = 0; c < 4; ++c) {
    int piv = -1;
    for (int r = c; r < 4; ++r)
      if (m[r][c] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) return std::nullopt;
    std::swap(m[c], m[piv]);
    std::swap(inv[c], inv[piv]);
    mpq_class f = m[c][c];
    for (int j = 0; j < 4; ++j) {
      m[c][j] /= f;
      inv[c][j] /= f;
    }
    for (int r = 0; r < 4; ++r) {
      if (r == c || m[r][c] == 0) continue;
      mpq_class g = m[r][c];
      for (int j = 0; j < 4; ++j) {
        m[r][j] -= g * m[c][j];
        inv[r][j] -= g * inv[c][j];
      }
    }
  }
  return inv;
}

mpq_class determinant4(RationalMatrix4 m) {
  mpq_class det = 1;
  for (int c = 0; c < 4; ++c) {
    int piv = -1;
    for (int r = c; r < 4; ++r)
      if (m[r][c] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) return 0;
    if (piv != c) {
      std::swap(m[c], m[piv]);
      det = -det;
    }
    det *= m[c][c];
    for (int r = c + 1; r < 4; ++r) {
      mpq_class g = m[r][c] / m[c][c];
      for (int j = c; j < 4; ++j) m[r][j] -= g * m[c][j];
    }
  }
  return det;
}

bool is_integer(const mpq_class& x) { return x.get_den() == 1; }

// Reduced discriminant of the lattice spanned by the basis, if it is a nondegenerate integral lattice.
mpq_class lattice_discriminant(const QuaternionAlgebra& B, const std::array<RationalQuaternion, 4>& basis) {
  RationalMatrix4 t;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) t[i][j] = quaternion_trace(quaternion_product(B, basis[i], basis[j]));
  mpq_class d = abs(determinant4(t));
  mpz_class num = d.get_num(), den = d.get_den();
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
  if (rn * rn != num || rd * rd != den) return -1;
  return mpq_class(rn, rd);
}

// Basis (as rational quaternions) of the lattice generated by the given quaternions.
std::array<RationalQuaternion, 4> lattice_basis(const std::vector<RationalQuaternion>& gens) {
  mpz_class D = 1;
  for (const auto& g : gens)
    for (const auto& x : g) mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), x.get_den_mpz_t());
  IntMatrix rows;
  for (const auto& g : gens) {
    IntVector r(4);
    for (int t = 0; t < 4; ++t) {
      mpq_class s = g[t] * D;
      r[t] = s.get_num();
    }
    rows.push_back(r);
  }
  IntMatrix H = hermite_basis(rows, 4);
  if (H.size() != 4) throw std::logic_error("lattice_basis: rank deficient");
  std::array<RationalQuaternion, 4> out;
  for (int i = 0; i < 4; ++i)
    for (int t = 0; t < 4; ++t) {
      out[i][t] = mpq_class(H[i][t], D);
      out[i][t].canonicalize();
    }
  return out;
}

bool integral_lattice(const QuaternionAlgebra& B, const std::array<RationalQuaternion, 4>& basis) {
  for (int i = 0; i < 4; ++i) {
    if (!is_integer(quaternion_trace(basis[i])) || !is_integer(quaternion_norm(B, basis[i]))) return false;
    for (int j = 0; j < 4; ++j)
      if (!is_integer(quaternion_trace(quaternion_product(B, basis[i], basis[j])))) return false;
  }
  return true;
}

// Smallest ring containing the lattice, or nullopt if some generated element is not integral.
std::optional<std::array<RationalQuaternion, 4>> ring_closure(const QuaternionAlgebra& B,
                                                              std::vector<RationalQuaternion> gens) {
  auto basis = lattice_basis(gens);
  while (true) {
    if (!integral_lattice(B, basis)) return std::nullopt;
    std::vector<RationalQuaternion> next(basis.begin(), basis.end());
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) next.push_back(quaternion_product(B, basis[i], basis[j]));
    auto nb = lattice_basis(next);
    RationalMatrix4 m0, m1;
    for (int i = 0; i < 4; ++i)
      for (int t = 0; t < 4; ++t) {
        m0[i][t] = basis[i][t];
        m1[i][t] = nb[i][t];
      }
    if (abs(determinant4(m0)) == abs(determinant4(m1))) return basis;
    basis = nb;
  }
}

}  // namespace

QuaternionOrder QuaternionOrder::from_basis(const QuaternionAlgebra& B, const std::array<RationalQuaternion, 4>& basis,
                                            long level) {
  QuaternionOrder o;
  o.algebra_ = B;
  o.level_ = level;
  o.basis_ = basis;
  RationalMatrix4 m;
  for (int i = 0; i < 4; ++i)
    for (int t = 0; t < 4; ++t) m[t][i] = basis[i][t];  // columns are basis vectors
  auto inv = invert4(m);
  if (!inv) throw DomainError("order basis is singular");
  o.inverse_ = *inv;
  auto coords = [&](const RationalQuaternion& q) -> IntVector {
    IntVector c(4);
    for (int i = 0; i < 4; ++i) {
      mpq_class s = 0;
      for (int t = 0; t < 4; ++t) s += o.inverse_[i][t] * q[t];
      if (!is_integer(s)) throw DomainError("basis does not span a ring");
      c[i] = s.get_num();
    }
    return c;
  };
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) o.mult_[i][j] = coords(quaternion_product(B, basis[i], basis[j]));
  o.one_ = coords(RationalQuaternion{1, 0, 0, 0});
  o.traces_.resize(4);
  o.gram_.assign(4, IntVector(4));
  for (int i = 0; i < 4; ++i) {
    mpq_class t = quaternion_trace(basis[i]);
    if (!is_integer(t)) throw DomainError("basis element is not integral");
    o.traces_[i] = t.get_num();
    for (int j = 0; j < 4; ++j) {
      mpq_class g = quaternion_trace(quaternion_product(B, basis[i], quaternion_conjugate(basis[j])));
      if (!is_integer(g)) throw DomainError("basis element is not integral");
      o.gram_[i][j] = g.get_num();
    }
  }
  return o;
}

mpz_class QuaternionOrder::discriminant() const {
  mpq_class d = lattice_discriminant(algebra_, basis_);
  if (d < 0 || !is_integer(d)) throw std::logic_error("order discriminant is not an integer");
  return d.get_num();
}

QuaternionOrder QuaternionOrder::maximal(const QuaternionAlgebra& B) {
  std::array<RationalQuaternion, 4> basis{RationalQuaternion{1, 0, 0, 0}, RationalQuaternion{0, 1, 0, 0},
                                          RationalQuaternion{0, 0, 1, 0}, RationalQuaternion{0, 0, 0, 1}};
  mpq_class disc = lattice_discriminant(B, basis);
  while (disc != B.discriminant) {
    mpq_class ratio = disc / B.discriminant;
    if (!is_integer(ratio)) throw std::logic_error("saturation overshot the discriminant");
    bool improved = false;
    for (const auto& [ell, e] : factorize(ratio.get_num().get_si())) {
      long total = ell * ell * ell * ell;
      for (long code = 1; code < total && !improved; ++code) {
        RationalQuaternion x{0, 0, 0, 0};
        long c = code;
        for (int i = 0; i < 4; ++i) {
          long eps = c % ell;
          c /= ell;
          for (int t = 0; t < 4; ++t) x[t] += mpq_class(eps, ell) * basis[i][t];
        }
        for (auto& v : x) v.canonicalize();
        if (!is_integer(quaternion_trace(x)) || !is_integer(quaternion_norm(B, x))) continue;
        std::vector<RationalQuaternion> gens(basis.begin(), basis.end());
        gens.push_back(x);
        auto closed = ring_closure(B, gens);
        if (!closed) continue;
        mpq_class d = lattice_discriminant(B, *closed);
        if (d > 0 && d < disc) {
          basis = *closed;
          disc = d;
          improved = true;
        }
      }
      if (improved) break;
    }
    if (!improved) throw std::logic_error("saturation failed to reach a maximal order");
  }
  return from_basis(B, basis, 1);
}

QuaternionOrder QuaternionOrder::eichler(long level) const {
  if (level < 1) throw DomainError("level must be positive");
  if (level == 1) return *this;
  IntMatrix coords(4, IntVector(4, 0));
  for (int i = 0; i < 4; ++i) coords[i][i] = 1;
  std::vector<Congruence> conditions;
  for (const auto& [ell, e] : factorize(level)) {
    if (algebra_.discriminant % ell == 0) throw DomainError("level must be coprime to the discriminant");
    Splitting s(*this, static_cast<unsigned>(ell));
    auto images = s.basis_images(e);
    Congruence c;
    c.modulus = prime_power(static_cast<unsigned>(ell), e);
    for (int i = 0; i < 4; ++i) c.coefficients.push_back(images[i].c());
    conditions.push_back(c);
  }
  IntMatrix sub = congruence_sublattice(coords, conditions);
  std::array<RationalQuaternion, 4> nb;
  for (int r = 0; r < 4; ++r) {
    nb[r] = {0, 0, 0, 0};
    for (int i = 0; i < 4; ++i)
      for (int t = 0; t < 4; ++t) nb[r][t] += mpq_class(sub[r][i]) * basis_[i][t];
  }
  QuaternionOrder o = from_basis(algebra_, nb, level * level_);
  if (o.discriminant() != algebra_.discriminant * o.level_)
    throw std::logic_error("Eichler order has the wrong discriminant");
  return o;
}

IntVector QuaternionOrder::multiply(const IntVector& x, const IntVector& y) const {
  IntVector z(4, 0);
  for (int i = 0; i < 4; ++i) {
    if (x[i] == 0) continue;
    for (int j = 0; j < 4; ++j) {
      if (y[j] == 0) continue;
      mpz_class f = x[i] * y[j];
      for (int t = 0; t < 4; ++t) z[t] += f * mult_[i][j][t];
    }
  }
  return z;
}

IntVector QuaternionOrder::conjugate(const IntVector& x) const {
  mpz_class t = trace(x);
  IntVector z(4);
  for (int i = 0; i < 4; ++i) z[i] = t * one_[i] - x[i];
  return z;
}

mpz_class QuaternionOrder::trace(const IntVector& x) const {
  mpz_class t = 0;
  for (int i = 0; i < 4; ++i) t += x[i] * traces_[i];
  return t;
}

mpz_class QuaternionOrder::norm(const IntVector& x) const { return quadratic_value(x, gram_) / 2; }

RationalQuaternion QuaternionOrder::to_quaternion(const IntVector& x) const {
  RationalQuaternion q{0, 0, 0, 0};
  for (int i = 0; i < 4; ++i)
    for (int t = 0; t < 4; ++t) q[t] += mpq_class(x[i]) * basis_[i][t];
  return q;
}

std::optional<IntVector> QuaternionOrder::coordinates(const RationalQuaternion& q) const {
  IntVector c(4);
  for (int i = 0; i < 4; ++i) {
    mpq_class s = 0;
    for (int t = 0; t < 4; ++t) s += inverse_[i][t] * q[t];
    if (!is_integer(s)) return std::nullopt;
    c[i] = s.get_num();
  }
  return c;
}

namespace {

// Root mod q^prec of x^2 - t x + n lifting the residue r0 (simple root).
mpz_class hensel_root(const mpz_class& t, const mpz_class& n, mpz_class r, unsigned q, long prec) {
  const mpz_class& mod = prime_power(q, prec);
  for (long have = 1; have < prec; have *= 2) {
    mpz_class f = r * r - t * r + n;
    mpz_class df = 2 * r - t, inv;
    if (!mpz_invert(inv.get_mpz_t(), df.get_mpz_t(), mod.get_mpz_t()))
      throw std::logic_error("hensel_root: derivative is not a unit");
    r = mod_positive(r - f * inv, mod);
  }
  return r;
}

}  // namespace

Splitting::Splitting(const QuaternionOrder& order, unsigned q, int variant) : order_(order), q_(q), variant_(variant) {
  if (order.algebra().discriminant % static_cast<long>(q) == 0) throw DomainError("the algebra is ramified at this prime");
  // candidates ordered by box size, then lexicographically
  int found = 0;
  for (long box = 1; box <= 6; ++box) {
    long side = 2 * box + 1;
    long total = side * side * side * side;
    for (long code = 0; code < total; ++code) {
      IntVector x(4);
      long c = code, mx = 0;
      for (int i = 0; i < 4; ++i) {
        x[i] = c % side - box;
        c /= side;
        mx = std::max(mx, std::abs(x[i].get_si()));
      }
      if (mx != box) continue;
      mpz_class t = order.trace(x), n = order.norm(x);
      bool admissible;
      if (q == 2) {
        admissible = mod2(t) == 1 && mod2(n) == 0;
      } else {
        mpz_class d = t * t - 4 * n, Q = q;
        admissible = d % Q != 0 && mpz_legendre(d.get_mpz_t(), Q.get_mpz_t()) == 1;
      }
      if (!admissible) continue;
      if (found++ == variant) {
        generator_ = x;
        return;
      }
    }
  }
  throw DomainError("no splitting element found");
}

void Splitting::compute(long precision) const {
  const unsigned q = q_;
  const long P = precision;
  const mpz_class& mod = prime_power(q, P);
  const IntVector& x = generator_;
  mpz_class t = order_.trace(x), n = order_.norm(x);
  mpz_class r0 = -1;
  for (unsigned r = 0; r < q; ++r) {
    mpz_class f = mpz_class(r) * r - t * r + n;
    if (mod_positive(f, q) == 0) {
      r0 = r;
      break;
    }
  }
  mpz_class l1 = hensel_root(t, n, r0, q, P);
  mpz_class l2 = mod_positive(t - l1, mod);
  mpz_class diff = mod_positive(l1 - l2, mod), dinv;
  mpz_invert(dinv.get_mpz_t(), diff.get_mpz_t(), mod.get_mpz_t());
  // idempotent e = (x - l2) / (l1 - l2)
  IntVector e(4);
  for (int i = 0; i < 4; ++i) e[i] = mod_positive((x[i] - l2 * order_.one()[i]) * dinv, mod);
  auto unit = [&](int i) {
    IntVector v(4, 0);
    v[i] = 1;
    return v;
  };
  std::vector<IntVector> span;
  for (int i = 0; i < 4; ++i) {
    IntVector v = order_.multiply(unit(i), e);
    for (auto& c : v) c = mod_positive(c, mod);
    span.push_back(v);
  }
  // a basis of the ideal: two generators with a unit 2x2 minor
  int bi = -1, bj = -1, cr = -1, cs = -1;
  mpz_class minor_inv;
  for (int i = 0; i < 4 && bi < 0; ++i)
    for (int j = i + 1; j < 4 && bi < 0; ++j)
      for (int r = 0; r < 4 && bi < 0; ++r)
        for (int s = r + 1; s < 4 && bi < 0; ++s) {
          mpz_class m = span[i][r] * span[j][s] - span[j][r] * span[i][s];
          if (m % q == 0) continue;
          bi = i;
          bj = j;
          cr = r;
          cs = s;
          mpz_invert(minor_inv.get_mpz_t(), m.get_mpz_t(), mod.get_mpz_t());
        }
  if (bi < 0) throw std::logic_error("splitting: ideal basis not found");
  const IntVector& v0 = span[bi];
  const IntVector& v1 = span[bj];
  // solve [v0 v1] (c0, c1)^T = w in coordinates r, s
  auto solve = [&](const IntVector& w) {
    mpz_class c0 = mod_positive((w[cr] * v1[cs] - v1[cr] * w[cs]) * minor_inv, mod);
    mpz_class c1 = mod_positive((v0[cr] * w[cs] - w[cr] * v0[cs]) * minor_inv, mod);
    return std::make_pair(c0, c1);
  };
  for (int m = 0; m < 4; ++m) {
    auto [a, c] = solve(order_.multiply(unit(m), v0));
    auto [b, d] = solve(order_.multiply(unit(m), v1));
    cached_[m] = IMat2(a, b, c, d);
  }
  cached_precision_ = P;
}

std::array<IMat2, 4> Splitting::basis_images(long precision) const {
  if (precision < 1) precision = 1;
  if (precision > cached_precision_) compute(std::max(precision, 2 * cached_precision_));
  if (precision == cached_precision_) return cached_;
  const mpz_class& mod = prime_power(q_, precision);
  std::array<IMat2, 4> out;
  for (int m = 0; m < 4; ++m)
    for (int t = 0; t < 4; ++t) out[m].e[t] = mod_positive(cached_[m].e[t], mod);
  return out;
}

IMat2 Splitting::image_mod(const IntVector& x, long precision) const {
  if (precision > cached_precision_) compute(std::max(precision, 2 * cached_precision_));
  const mpz_class& mod = prime_power(q_, precision);
  IMat2 out(0, 0, 0, 0);
  for (int m = 0; m < 4; ++m) {
    if (x[m] == 0) continue;
    for (int t = 0; t < 4; ++t) out.e[t] += x[m] * cached_[m].e[t];
  }
  for (auto& v : out.e) v = mod_positive(v, mod);
  return out;
}

PMat2 Splitting::image(const IntVector& x, long precision) const {
  return PMat2::from_integer(q_, image_mod(x, precision), precision);
}

std::vector<IntVector> enumerate_norm(const QuaternionOrder& order, const mpz_class& n,
                                      const std::vector<Congruence>& congruences) {
  IntMatrix basis(4, IntVector(4, 0));
  for (int i = 0; i < 4; ++i) basis[i][i] = 1;
  if (!congruences.empty()) basis = congruence_sublattice(basis, congruences);
  basis = lll_reduce(basis, order.trace_gram());
  auto candidates = short_vectors(basis, order.trace_gram(), 2 * n);
  std::vector<IntVector> out;
  for (auto& v : candidates)
    if (order.norm(v) == n) out.push_back(v);
  return out;
}

}  // namespace lop
