#pragma once

#include <map>
#include <vector>

#include "lop/overconv.hpp"
#include "lop/series.hpp"

namespace lop {

// A point of H_p(K_p) reducing to v0, with its Galois conjugate.
struct BasePoint {
  UnramifiedElement tau;
  UnramifiedElement conjugate;
};

// Teichmuller lift of a generator of F_{p^2}^x; variant selects among the generators a + b*w
// in lexicographic order of (b, a).
BasePoint base_point(unsigned p, long precision, int variant = 0);

// (a z + b) / (c z + d)
UnramifiedElement mobius(const PMat2& g, const UnramifiedElement& z);

// Vertex containing z = a + b*w in its affinoid: [[b, a], [0, 1]] v0.
NormalizedVertex reduction(const UnramifiedElement& z);

// Edges leaving the geodesic red(to) .. red(from); their balls partition P^1(Q_p).
std::vector<NormalizedEdge> covering(const UnramifiedElement& from, const UnramifiedElement& to);

// Largest v_p(det) over the covering edges.
long covering_depth(const UnramifiedElement& from, const UnramifiedElement& to);
// Moments beyond the target precision a lift needs for coverings of the given depth.
long extra_moments_for(unsigned p, long k, long depth, long precision);

// Lower bound max(i - k, 0) - (k/2) d - floor(log_p i) for the valuation of coefficient i of the
// integrand on a ball with v_p(det g) = d.
long coefficient_floor(unsigned p, long k, long det_valuation, long i);
// Largest i with coefficient_floor(i) - scale < precision.
long truncation_index(unsigned p, long k, long det_valuation, long precision, long scale);

// log_p((g x - to) / (g x - from)) up to x^order.
UnramifiedSeries log_ratio_series(const PMat2& g, const UnramifiedElement& from, const UnramifiedElement& to,
                                  std::size_t order);

// (x^m |_k g)(x) * log_p((g x - to) / (g x - from)) up to x^order.
UnramifiedSeries integrand_series(long m, const PMat2& g, const UnramifiedElement& from,
                                  const UnramifiedElement& to, long k, std::size_t order);

struct CoveringPiece {
  NormalizedEdge edge;
  long det_valuation = 0;
  long truncation = 0;              // N
  std::vector<UnramifiedSeries> rows;  // integrand for x^0 .. x^k, coefficients 0..N
};

// Integrals of P(x) log_p((x - to)/(x - from)) d mu_c for the monomials P = x^m, m <= k.
class PathIntegral {
 public:
  PathIntegral(const FundamentalDomain& domain, long k, const UnramifiedElement& from, const UnramifiedElement& to,
               long precision, long scale_bound);

  const std::vector<CoveringPiece>& pieces() const { return pieces_; }
  // Number of moments the lift must provide.
  long required_moments() const;
  std::vector<UnramifiedElement> evaluate(const OverconvergentForm& form) const;

 private:
  const EdgeReduction& reduction(std::size_t piece, long precision) const;

  const FundamentalDomain* domain_;
  long k_;
  long precision_;
  long scale_bound_;
  std::vector<CoveringPiece> pieces_;
  mutable std::map<std::pair<std::size_t, long>, EdgeReduction> reductions_;
};

UnramifiedElement coleman_integral(const OverconvergentForm& form, const FundamentalDomain& domain, long m,
                                   const UnramifiedElement& from, const UnramifiedElement& to, long precision);

// m -> Tr(int_tau^{gamma tau} omega_c(x^m)) with Tr = Tr_{K_p/Q_p} / 2.
VkElement lambda_value(const OverconvergentForm& form, const FundamentalDomain& domain, const QuatElem& gamma,
                       const BasePoint& tau, long precision);
VkElement lambda_value(const std::vector<UnramifiedElement>& integrals);

// gamma tau for an element of Gamma.
UnramifiedElement translate(const ArithmeticGroup& group, const QuatElem& gamma, const UnramifiedElement& z);

}  // namespace lop
