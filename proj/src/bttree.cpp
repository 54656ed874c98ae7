#include "lop/bttree.hpp"

#include <algorithm>

namespace lop {

namespace {

struct Column {
  PadicNumber x, y;
};

long distance_of(unsigned p, const IMat2& m) { return valuation_of(p, m.det()); }

mpz_class mod_reduce(const mpz_class& x, const mpz_class& m) {
  mpz_class r = x % m;
  if (r < 0) r += m;
  return r;
}

// Column Hermite form [[p^A, B], [0, p^C]] of the lattice spanned by the columns, up to homothety.
IMat2 lattice_hnf(unsigned p, std::vector<Column> cols) {
  std::size_t q = cols.size();
  long best = 0;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (cols[i].y.is_zero()) continue;
    if (q == cols.size() || cols[i].y.valuation() < best) {
      best = cols[i].y.valuation();
      q = i;
    }
  }
  if (q == cols.size()) throw DomainError("singular matrix (or precision exhausted) in normalization");
  const PadicNumber yq = cols[q].y;
  std::optional<PadicNumber> xmin;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i == q) continue;
    PadicNumber xi = cols[i].x - cols[i].y / yq * cols[q].x;
    if (xi.is_zero()) continue;
    if (!xmin || xi.valuation() < xmin->valuation()) xmin = xi;
  }
  if (!xmin) throw DomainError("singular matrix (or precision exhausted) in normalization");
  long A = xmin->valuation();
  long C = yq.valuation();
  PadicNumber uq = PadicNumber::from_parts(p, 0, yq.unit(), yq.relative_precision());
  PadicNumber B = cols[q].x / uq;
  long m = std::min(A, C);
  if (!B.is_zero()) m = std::min(m, B.valuation());
  else if (B.precision() < m) throw PrecisionError("normalization: off-diagonal entry lacks precision");
  A -= m;
  C -= m;
  B = B.shifted(-m);
  if (B.precision() < A) throw PrecisionError("normalization: off-diagonal entry lacks precision");
  mpz_class Bz = A == 0 ? mpz_class(0) : mod_reduce(B.with_precision(A).lift(), prime_power(p, A));
  return IMat2(prime_power(p, A), Bz, 0, prime_power(p, C));
}

PMat2 to_padic(unsigned p, const IMat2& m, long prec) { return PMat2::from_integer(p, m, prec); }

mpq_class canonical_center(unsigned p, const mpq_class& c, long radius) {
  if (c == 0) return 0;
  long e = std::max(0L, -valuation_of(p, c));
  long E = std::max(e, -radius);
  mpq_class scaled = c * mpq_class(prime_power(p, E));
  scaled.canonicalize();
  mpz_class N = scaled.get_num();
  mpz_class red = mod_reduce(N, prime_power(p, radius + E));
  mpq_class out(red, prime_power(p, E));
  out.canonicalize();
  return out;
}

}  // namespace

long NormalizedVertex::distance() const { return distance_of(p, m); }

IMat2 alpha_matrix(unsigned p, long l) { return IMat2(p, l, 0, 1); }
IMat2 g0_matrix(unsigned p) { return IMat2(0, 1, p, 0); }

long exact_precision(unsigned p, const IMat2& g) {
  mpz_class d = g.det();
  if (d == 0) throw DomainError("singular matrix");
  long v = valuation_of(p, d);
  long mx = 0;
  for (const auto& x : g.e)
    if (x != 0) mx = std::max(mx, valuation_of(p, x));
  return 2 * v + mx + 8;
}

NormalizedVertex normalize_vertex(const PMat2& g) {
  NormalizedVertex v;
  v.p = g.prime();
  v.m = lattice_hnf(g.prime(), {{g.a, g.c}, {g.b, g.d}});
  return v;
}

NormalizedVertex normalize_vertex(unsigned p, const IMat2& g) {
  return normalize_vertex(to_padic(p, g, exact_precision(p, g)));
}

VertexNormalization normalize_vertex_with_witness(const PMat2& g) {
  VertexNormalization out;
  out.vertex = normalize_vertex(g);
  const unsigned p = g.prime();
  PadicNumber det = g.det();
  long s2 = out.vertex.distance() - det.valuation();
  out.u_exponent = s2 / 2;
  long prec = g.precision() + 2;
  out.k = g.inverse() * to_padic(p, out.vertex.m, prec);
  out.k = out.k.shifted(-out.u_exponent);
  return out;
}

EdgeNormalization normalize_edge(const PMat2& g) {
  const unsigned p = g.prime();
  NormalizedVertex t = normalize_vertex(g);
  long d = t.distance();
  // h = t^{-1} g up to scalar
  PMat2 h = t.m.adjugate() * g;
  h = h.shifted(-h.min_valuation());
  IMat2 mj;
  if (!h.c.is_zero() && h.c.valuation() == 0) {
    PadicNumber j = (h.a / h.c).with_precision(1);
    mpz_class jz = j.is_zero() ? mpz_class(0) : mod_reduce(j.lift(), mpz_class(p));
    mj = IMat2(jz, 1, 1, 0);
  } else {
    if (h.c.is_zero() && h.c.precision() < 1) throw PrecisionError("edge normalization lacks precision");
    mj = IMat2(1, 0, 0, 1);
  }
  EdgeNormalization out;
  out.edge.p = p;
  out.edge.m = t.m * mj;
  long s2 = d - g.det().valuation();
  out.u_exponent = s2 / 2;
  long prec = g.precision() + 2;
  out.sigma = (g.inverse() * to_padic(p, out.edge.m, prec)).shifted(-out.u_exponent);
  return out;
}

NormalizedEdge normalize_edge(unsigned p, const IMat2& g) {
  return normalize_edge(to_padic(p, g, exact_precision(p, g))).edge;
}

NormalizedVertex base_vertex(unsigned p) { return NormalizedVertex{IMat2(), p}; }
NormalizedEdge base_edge(unsigned p) { return NormalizedEdge{IMat2(), p}; }

NormalizedVertex target(const NormalizedEdge& e) { return normalize_vertex(e.p, e.m); }
NormalizedVertex source(const NormalizedEdge& e) { return normalize_vertex(e.p, e.m * g0_matrix(e.p)); }
NormalizedEdge opposite(const NormalizedEdge& e) { return normalize_edge(e.p, e.m * g0_matrix(e.p)); }

std::vector<NormalizedEdge> star(const NormalizedVertex& v) {
  std::vector<NormalizedEdge> out;
  for (unsigned l = 0; l < v.p; ++l) out.push_back(normalize_edge(v.p, v.m * alpha_matrix(v.p, l)));
  out.push_back(normalize_edge(v.p, v.m * g0_matrix(v.p)));
  return out;
}

std::vector<NormalizedVertex> neighbours(const NormalizedVertex& v) {
  std::vector<NormalizedVertex> out;
  for (unsigned l = 0; l < v.p; ++l) out.push_back(normalize_vertex(v.p, v.m * alpha_matrix(v.p, l)));
  out.push_back(normalize_vertex(v.p, v.m * g0_matrix(v.p)));
  return out;
}

std::vector<NormalizedVertex> geodesic(const NormalizedVertex& v, const NormalizedVertex& w) {
  const unsigned p = v.p;
  // translate so that v becomes v0
  IMat2 h = v.m.adjugate() * w.m;
  NormalizedVertex u = normalize_vertex(p, h);
  long d = u.distance();
  std::vector<NormalizedVertex> out;
  long prec = 3 * d + 10;
  for (long i = 0; i <= d; ++i) {
    std::vector<Column> cols{{PadicNumber::from_integer(p, u.m.a(), prec), PadicNumber::from_integer(p, u.m.c(), prec)},
                             {PadicNumber::from_integer(p, u.m.b(), prec), PadicNumber::from_integer(p, u.m.d(), prec)},
                             {PadicNumber::from_integer(p, prime_power(p, i), prec), PadicNumber::zero(p, prec)},
                             {PadicNumber::zero(p, prec), PadicNumber::from_integer(p, prime_power(p, i), prec)}};
    IMat2 step = lattice_hnf(p, cols);
    out.push_back(normalize_vertex(p, v.m * step));
  }
  return out;
}

NormalizedEdge edge_between(const NormalizedVertex& v, const NormalizedVertex& w) {
  auto edges = star(v);
  for (const auto& e : edges)
    if (target(e) == w) return e;
  throw DomainError("edge_between: vertices are not adjacent");
}

std::vector<NormalizedEdge> edges_leaving_geodesic(const NormalizedVertex& v, const NormalizedVertex& w) {
  auto path = geodesic(v, w);
  std::vector<NormalizedEdge> out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    auto edges = star(path[i]);
    for (const auto& e : edges) {
      NormalizedVertex t = target(e);
      if (i > 0 && t == path[i - 1]) continue;
      if (i + 1 < path.size() && t == path[i + 1]) continue;
      out.push_back(e);
    }
  }
  return out;
}

bool Ball::contains(const std::optional<mpq_class>& x) const {
  bool inside;
  if (!x) {
    inside = false;
  } else {
    mpq_class diff = *x - center;
    inside = diff == 0 || valuation_of(p, diff) >= radius;
  }
  return complement ? !inside : inside;
}

Ball ball_of_edge(const NormalizedEdge& e) {
  const unsigned p = e.p;
  // e.m = t * m_j, recover t and j
  IMat2 g = e.m;
  Ball b;
  b.p = p;
  if (g.c() == 0) {
    long A = valuation_of(p, g.a()), C = valuation_of(p, g.d());
    b.complement = false;
    b.radius = A - C;
    b.center = canonical_center(p, mpq_class(g.b(), g.d()), b.radius);
  } else {
    // [[p^A j + B, p^A], [p^C, 0]]
    long A = valuation_of(p, g.b()), C = valuation_of(p, g.c());
    b.complement = true;
    b.radius = A - C + 1;
    b.center = canonical_center(p, mpq_class(g.a(), g.c()), b.radius);
  }
  return b;
}

PMat2 edge_matrix_of_ball(const Ball& b, long precision) {
  const unsigned p = b.p;
  mpq_class pn = b.radius >= 0 ? mpq_class(prime_power(p, b.radius)) : mpq_class(1, prime_power(p, -b.radius));
  PMat2 beta = PMat2::from_rationals(p, pn, b.center, 0, 1, precision);
  if (!b.complement) return beta;
  return beta * g0_matrix(p);
}

Ball transform_ball(const PMat2& g, const Ball& b) {
  PMat2 e = edge_matrix_of_ball(b, g.precision());
  return ball_of_edge(normalize_edge(g * e).edge);
}

}  // namespace lop
