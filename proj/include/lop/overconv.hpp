#pragma once

#include <vector>

#include "lop/cocycle.hpp"

namespace lop {

// Data of a form on the domain representatives: moments Phi(b_j)(x^i), i = 0..k+n, stored as
// integers modulo p^modulus_exponent and representing p^-scale times the true moments.
struct OverconvergentForm {
  unsigned p = 0;
  long k = 0;
  long level = 0;           // n
  long scale = 0;           // t
  long modulus_exponent = 0;
  long low_precision = 0;   // absolute precision of the stored moments i <= k
  long iterations = 0;
  std::vector<std::vector<mpz_class>> moments;

  std::size_t moment_count() const { return static_cast<std::size_t>(k + level) + 1; }
  // Absolute precision of stored moment i before descaling.
  long stored_precision(long i) const;
  // p^-t * stored moment, with its guaranteed precision.
  PadicNumber moment(int j, long i) const;
};

// b_j alpha_l = u gamma b_target sigma for every representative and every l.
class UpTable {
 public:
  UpTable(const FundamentalDomain& domain, long precision);
  struct Step {
    int target = 0;
    PMat2 sigma;
  };
  const Step& step(int j, unsigned l) const { return steps_[j][l]; }
  std::size_t size() const { return steps_.size(); }
  long precision() const { return precision_; }

 private:
  std::vector<std::vector<Step>> steps_;
  long precision_;
};

// Precomputed moment matrices of p^(-k/2) U_p at a fixed weight, level and modulus.
class UpOperator {
 public:
  UpOperator(const UpTable& table, unsigned p, long k, long level, long modulus_exponent);
  OverconvergentForm apply(const OverconvergentForm& form) const;
  long k() const { return k_; }
  long level() const { return level_; }

 private:
  unsigned p_;
  long k_, level_, modulus_;
  // numerators of the combined matrices, denominators p^(k/2)
  std::vector<std::vector<std::vector<std::vector<mpz_class>>>> blocks_;
  std::vector<std::vector<int>> targets_;
};

// phi_c(b_j) = b_j^-1 . c(b_j e0) for every representative.
std::vector<VkElement> automorphic_values(const CocycleSpace& space, const HarmonicCocycle& c);

// Lift of level n with the global scale chosen so that all moments are integral and the low moments
// satisfy v(m_i) >= k/2 - i.
OverconvergentForm initial_lift(const CocycleSpace& space, const HarmonicCocycle& c, long level);

// Replace moments i <= k by those of the given form (exact cocycle values).
void reset_low_moments(OverconvergentForm& form, const OverconvergentForm& source);

struct LiftOptions {
  long extra_iterations = 0;
};

// Overconvergent lift with moments m_i, i <= k + extra_moments, correct to about precision digits.
OverconvergentForm lift_moments(const CocycleSpace& space, const HarmonicCocycle& c, long precision,
                                long extra_moments, const LiftOptions& options = {});

// m(mu_c, g, i) = Phi_c(g)(x^i) for an arbitrary matrix g.
PadicNumber moment(const OverconvergentForm& form, const FundamentalDomain& domain, const PMat2& g, long i);
std::vector<PadicNumber> moments(const OverconvergentForm& form, const FundamentalDomain& domain, const PMat2& g,
                                 long count);
std::vector<PadicNumber> moments(const OverconvergentForm& form, const EdgeReduction& reduction, long count);

}  // namespace lop
