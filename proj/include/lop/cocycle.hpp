#pragma once

#include <map>
#include <memory>
#include <vector>

#include "lop/fdomain.hpp"
#include "lop/linalg.hpp"

namespace lop {

// Element of V_k: its values on 1, x, ..., x^k.
using VkElement = std::vector<PadicNumber>;

// Matrix R with x^i |_k g = sum_m R(i, m) x^m for the right action
// (P |_k g)(x) = det(g)^(-k/2) (cx + d)^k P((ax + b)/(cx + d)).
PadicMatrix polynomial_action(const PMat2& g, long k);

// (g . w)(P) = w(P |_k g); a left action on V_k.
VkElement vk_act(const PMat2& g, const VkElement& w);
VkElement vk_add(const VkElement& a, const VkElement& b);
VkElement vk_sub(const VkElement& a, const VkElement& b);
VkElement vk_neg(const VkElement& a);
VkElement vk_zero(unsigned p, long k, long precision);
long vk_valuation(const VkElement& a);

// Harmonic cocycle determined by its values on all domain representatives b_j e0.
struct HarmonicCocycle {
  long k = 0;
  std::vector<VkElement> values;
};

class CocycleSpace {
 public:
  CocycleSpace(std::shared_ptr<const FundamentalDomain> domain, long k, long precision);

  const FundamentalDomain& domain() const { return *domain_; }
  std::shared_ptr<const FundamentalDomain> domain_ptr() const { return domain_; }
  const ArithmeticGroup& group() const { return domain_->group(); }
  unsigned prime() const { return domain_->prime(); }
  long k() const { return k_; }
  long precision() const { return precision_; }

  // Action matrix of an element of B^x on V_k (scalars act trivially).
  const PadicMatrix& rho(const QuatElem& x) const;
  VkElement act(const QuatElem& x, const VkElement& w) const;

  // Basis of C_h(Gamma, V_k); vectors scaled so the values on positive representatives are integral with a unit.
  const std::vector<HarmonicCocycle>& basis() const;
  std::size_t dimension() const { return basis().size(); }

  // Extend values on the positive representatives (in positive_edges order) to all representatives.
  HarmonicCocycle from_positive(const std::vector<VkElement>& positive_values) const;
  HarmonicCocycle combination(const std::vector<PadicNumber>& coefficients) const;
  std::vector<PadicNumber> coordinates(const HarmonicCocycle& c) const;

  VkElement value(const HarmonicCocycle& c, const NormalizedEdge& e) const;
  VkElement value(const HarmonicCocycle& c, const PMat2& g) const;

  // Residual valuations of the defining equations (harmonicity, invariance); large means satisfied.
  long harmonicity_defect(const HarmonicCocycle& c) const;

  // c -> (e -> w . c(w^-1 e)) for an element w normalizing R[1/p].
  HarmonicCocycle transport(const HarmonicCocycle& c, const QuatElem& w) const;
  // Matrix of transport by w on basis coordinates (columns are images).
  PadicMatrix transport_matrix(const QuatElem& w) const;

  // Automorphic form phi_c(g) = g^-1 . c(g e0), and the V_k-valued U_p on it, at b_j.
  VkElement automorphic_value(const HarmonicCocycle& c, const PMat2& g) const;
  VkElement automorphic_up(const HarmonicCocycle& c, int j) const;
  // (W_p phi)(b_j) = phi(b_j g0) . g0^-1
  VkElement automorphic_wp(const HarmonicCocycle& c, int j) const;

 private:
  std::shared_ptr<const FundamentalDomain> domain_;
  long k_;
  long precision_;
  mutable std::map<QuatElem, PadicMatrix> rho_cache_;
  mutable std::vector<HarmonicCocycle> basis_;
  mutable bool basis_ready_ = false;
};

// Element of the order of reduced norm d * p^(2s) (smallest s <= max_s) normalizing R[1/p].
QuatElem normalizer_element(const ArithmeticGroup& group, long d, int max_s = 4);

// Atkin-Lehner eigenvalues in the classical normalization are the negatives of the
// eigenvalues of the quaternionic transport.
constexpr int kAtkinLehnerSign = -1;

}  // namespace lop
