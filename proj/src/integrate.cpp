#include "lop/integrate.hpp"

#include <algorithm>
#include <climits>

namespace lop {

namespace {

long floor_log(unsigned p, long i) {
  long out = 0;
  for (long q = i; q >= static_cast<long>(p); q /= p) ++out;
  return out;
}

// multiplicative order of a + b*w in F_{p^2}
long residue_order(const QuadraticField& F, long a, long b) {
  const long p = F.p;
  auto mod = [p](long x) { return ((x % p) + p) % p; };
  long x = mod(a), y = mod(b);
  long cx = x, cy = y;
  for (long n = 1; n <= p * p; ++n) {
    if (cx == 1 && cy == 0) return n;
    // (cx + cy w)(x + y w), w^2 = -c1 w - c0
    long yy = cy * y;
    long nx = mod(cx * x - yy * F.c0);
    long ny = mod(cx * y + cy * x - yy * F.c1);
    cx = nx;
    cy = ny;
  }
  return 0;
}

UnramifiedElement constant(const QuadraticField& F, long n, long precision) {
  return UnramifiedElement::from_base(F, PadicNumber::from_integer(F.p, n, precision));
}

// coefficients of (x^m |_k g) * l
UnramifiedSeries twist(const UnramifiedSeries& l, const PadicMatrix& R, long m, long k) {
  const auto& F = l[0].field();
  UnramifiedSeries out(l.size(), constant(F, 0, l[0].precision() + 64));
  for (long nu = 0; nu <= k; ++nu) {
    const PadicNumber& b = R(static_cast<std::size_t>(m), static_cast<std::size_t>(nu));
    if (b.is_zero()) continue;
    for (std::size_t i = static_cast<std::size_t>(nu); i < out.size(); ++i) out[i] += l[i - nu] * b;
  }
  return out;
}

}  // namespace

BasePoint base_point(unsigned p, long precision, int variant) {
  const QuadraticField F = QuadraticField::standard(p);
  int seen = 0;
  for (long b = 1; b < static_cast<long>(p); ++b)
    for (long a = 0; a < static_cast<long>(p); ++a) {
      if (residue_order(F, a, b) != static_cast<long>(p) * p - 1) continue;
      if (seen++ != variant) continue;
      UnramifiedElement x{F, PadicNumber::from_integer(p, a, precision), PadicNumber::from_integer(p, b, precision)};
      UnramifiedElement t = teichmuller(x);
      return {t, t.conjugate()};
    }
  throw DomainError("no generator of F_{p^2} with the requested variant index");
}

UnramifiedElement mobius(const PMat2& g, const UnramifiedElement& z) {
  const auto& F = z.field();
  UnramifiedElement num = z * g.a + UnramifiedElement::from_base(F, g.b);
  UnramifiedElement den = z * g.c + UnramifiedElement::from_base(F, g.d);
  return num / den;
}

NormalizedVertex reduction(const UnramifiedElement& z) {
  if (z.b().is_zero()) throw DomainError("point is not in the upper half plane at this precision");
  const unsigned p = z.prime();
  const long prec = std::min(z.a().precision(), z.b().precision());
  PMat2 m{z.b(), z.a(), PadicNumber::zero(p, prec + 8), PadicNumber::from_integer(p, 1, prec + 8)};
  return normalize_vertex(m);
}

std::vector<NormalizedEdge> covering(const UnramifiedElement& from, const UnramifiedElement& to) {
  return edges_leaving_geodesic(reduction(to), reduction(from));
}

long covering_depth(const UnramifiedElement& from, const UnramifiedElement& to) {
  long depth = 0;
  for (const auto& e : covering(from, to)) depth = std::max(depth, valuation_of(e.p, e.m.det()));
  return depth;
}

long extra_moments_for(unsigned p, long k, long depth, long precision) {
  return (k / 2) * depth + floor_log(p, 4 * (precision + k * depth + 64)) + 2;
}

long coefficient_floor(unsigned p, long k, long det_valuation, long i) {
  long r = std::max(i - k, 0L) - (k / 2) * det_valuation;
  if (i > 0) r -= floor_log(p, i);
  return r;
}

long truncation_index(unsigned p, long k, long det_valuation, long precision, long scale) {
  // i - floor(log_p i) is nondecreasing, so the first i past k clearing the bound ends the range
  long i = k + 1;
  while (coefficient_floor(p, k, det_valuation, i) - scale < precision) ++i;
  return i - 1;
}

UnramifiedSeries log_ratio_series(const PMat2& g, const UnramifiedElement& from, const UnramifiedElement& to,
                                  std::size_t order) {
  const auto& F = from.field();
  // g x - z = ((a - c z) x + (b - d z)) / (c x + d)
  UnramifiedElement A1 = UnramifiedElement::from_base(F, g.a) - from * g.c;
  UnramifiedElement B1 = UnramifiedElement::from_base(F, g.b) - from * g.d;
  UnramifiedElement A2 = UnramifiedElement::from_base(F, g.a) - to * g.c;
  UnramifiedElement B2 = UnramifiedElement::from_base(F, g.b) - to * g.d;
  UnramifiedElement u1 = A1 / B1, u2 = A2 / B2;
  if ((!u1.is_zero() && u1.valuation() < 1) || (!u2.is_zero() && u2.valuation() < 1))
    throw DomainError("covering ball meets the residue disc of an endpoint");
  UnramifiedSeries out;
  out.push_back(iwasawa_log(B2 / B1));
  UnramifiedElement p1 = u1, p2 = u2;
  const unsigned p = from.prime();
  for (std::size_t i = 1; i <= order; ++i) {
    UnramifiedElement diff = p2 - p1;
    const long prec = diff.precision() + valuation_of(p, mpz_class(static_cast<unsigned long>(i))) + 2;
    PadicNumber inv = PadicNumber::from_integer(p, static_cast<long>(i), prec).inverse();
    UnramifiedElement term = diff * inv;
    out.push_back(i % 2 == 1 ? term : -term);
    p1 *= u1;
    p2 *= u2;
  }
  return out;
}

UnramifiedSeries integrand_series(long m, const PMat2& g, const UnramifiedElement& from,
                                  const UnramifiedElement& to, long k, std::size_t order) {
  return twist(log_ratio_series(g, from, to, order), polynomial_action(g, k), m, k);
}

PathIntegral::PathIntegral(const FundamentalDomain& domain, long k, const UnramifiedElement& from,
                           const UnramifiedElement& to, long precision, long scale_bound)
    : domain_(&domain), k_(k), precision_(precision), scale_bound_(scale_bound) {
  const unsigned p = domain.prime();
  for (const auto& e : covering(from, to)) {
    CoveringPiece piece;
    piece.edge = e;
    piece.det_valuation = valuation_of(p, e.m.det());
    piece.truncation = truncation_index(p, k, piece.det_valuation, precision, scale_bound);
    const PMat2 g = PMat2::from_integer(p, e.m, std::max(from.precision(), to.precision()) + 16);
    const auto l = log_ratio_series(g, from, to, static_cast<std::size_t>(piece.truncation));
    const auto R = polynomial_action(g, k);
    for (long m = 0; m <= k; ++m) piece.rows.push_back(twist(l, R, m, k));
    pieces_.push_back(std::move(piece));
  }
}

long PathIntegral::required_moments() const {
  long n = 0;
  for (const auto& piece : pieces_) n = std::max(n, piece.truncation + 1);
  return n;
}

const EdgeReduction& PathIntegral::reduction(std::size_t piece, long precision) const {
  auto key = std::make_pair(piece, precision);
  auto it = reductions_.find(key);
  if (it == reductions_.end()) it = reductions_.emplace(key, domain_->reduce_edge(pieces_[piece].edge.m, precision)).first;
  return it->second;
}

std::vector<UnramifiedElement> PathIntegral::evaluate(const OverconvergentForm& form) const {
  if (form.k != k_) throw DomainError("form weight does not match the integrand");
  if (form.scale > scale_bound_)
    throw DomainError("lift scale " + std::to_string(form.scale) + " exceeds the truncation bound");
  const long needed = required_moments();
  if (needed > static_cast<long>(form.moment_count()))
    throw DomainError("lift level too low: integration needs moment index " + std::to_string(needed - 1));
  const unsigned p = domain_->prime();
  const QuadraticField F = QuadraticField::standard(p);
  std::vector<UnramifiedElement> out(static_cast<std::size_t>(k_) + 1, constant(F, 0, precision_));
  for (std::size_t j = 0; j < pieces_.size(); ++j) {
    const auto& piece = pieces_[j];
    const auto mom = moments(form, reduction(j, form.modulus_exponent), piece.truncation + 1);
    for (long m = 0; m <= k_; ++m) {
      const auto& row = piece.rows[static_cast<std::size_t>(m)];
      for (std::size_t i = 0; i < row.size(); ++i) out[static_cast<std::size_t>(m)] += row[i] * mom[i];
    }
  }
  // truncated tail lies below p^precision
  for (auto& x : out) x = x.with_precision(precision_);
  return out;
}

UnramifiedElement coleman_integral(const OverconvergentForm& form, const FundamentalDomain& domain, long m,
                                   const UnramifiedElement& from, const UnramifiedElement& to, long precision) {
  if (m < 0 || m > form.k) throw DomainError("monomial degree outside 0..k");
  PathIntegral path(domain, form.k, from, to, precision, form.scale);
  return path.evaluate(form)[static_cast<std::size_t>(m)];
}

UnramifiedElement translate(const ArithmeticGroup& group, const QuatElem& gamma, const UnramifiedElement& z) {
  const long prec = z.precision() + 2 * group.denominator_exponent(gamma) + 16;
  return mobius(group.matrix(gamma, prec), z);
}

VkElement lambda_value(const std::vector<UnramifiedElement>& integrals) {
  VkElement out;
  for (const auto& x : integrals) out.push_back(half_trace(x));
  return out;
}

VkElement lambda_value(const OverconvergentForm& form, const FundamentalDomain& domain, const QuatElem& gamma,
                       const BasePoint& tau, long precision) {
  UnramifiedElement end = translate(domain.group(), gamma, tau.tau);
  PathIntegral path(domain, form.k, tau.tau, end, precision, form.scale);
  return lambda_value(path.evaluate(form));
}

}  // namespace lop
