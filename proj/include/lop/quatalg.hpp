#pragma once

#include <gmpxx.h>

#include <array>
#include <map>
#include <optional>
#include <vector>

#include "lop/lattice.hpp"
#include "lop/matrix2.hpp"

namespace lop {

// Prime factorization of a small positive integer, increasing primes.
std::vector<std::pair<long, int>> factorize(long n);

// Local Hilbert symbol (a, b)_ell; ell == 0 stands for the infinite place.
int hilbert_symbol(const mpz_class& a, const mpz_class& b, long ell);

// B = (a, b / Q) with i^2 = a, j^2 = b, k = ij.
struct QuaternionAlgebra {
  long a = -1;
  long b = -1;
  long discriminant = 2;
};

// Definite algebra ramified exactly at infinity and the primes of nminus.
QuaternionAlgebra build_algebra(long nminus, unsigned p);

// Coordinates with respect to 1, i, j, k.
using RationalQuaternion = std::array<mpq_class, 4>;

RationalQuaternion quaternion_product(const QuaternionAlgebra& B, const RationalQuaternion& x,
                                      const RationalQuaternion& y);
RationalQuaternion quaternion_conjugate(const RationalQuaternion& x);
mpq_class quaternion_norm(const QuaternionAlgebra& B, const RationalQuaternion& x);
mpq_class quaternion_trace(const RationalQuaternion& x);

// Z-order given by four quaternions; elements are integer coordinate vectors in that basis.
class QuaternionOrder {
 public:
  QuaternionOrder() = default;
  static QuaternionOrder from_basis(const QuaternionAlgebra& B, const std::array<RationalQuaternion, 4>& basis,
                                    long level);
  static QuaternionOrder maximal(const QuaternionAlgebra& B);
  // Eichler suborder of the given level (coprime to the discriminant).
  QuaternionOrder eichler(long level) const;

  const QuaternionAlgebra& algebra() const { return algebra_; }
  long level() const { return level_; }
  const std::array<RationalQuaternion, 4>& basis() const { return basis_; }
  const IntVector& one() const { return one_; }
  const IntMatrix& trace_gram() const { return gram_; }  // trd(b_i conj(b_j)); nrd(x) = x^T G x / 2
  const IntVector& traces() const { return traces_; }
  mpz_class discriminant() const;

  IntVector multiply(const IntVector& x, const IntVector& y) const;
  IntVector conjugate(const IntVector& x) const;
  mpz_class norm(const IntVector& x) const;
  mpz_class trace(const IntVector& x) const;
  RationalQuaternion to_quaternion(const IntVector& x) const;
  // Coordinates of q, if q lies in the order.
  std::optional<IntVector> coordinates(const RationalQuaternion& q) const;

 private:
  QuaternionAlgebra algebra_;
  long level_ = 1;
  std::array<RationalQuaternion, 4> basis_;
  std::array<std::array<mpq_class, 4>, 4> inverse_;  // standard coordinates -> order coordinates
  std::array<std::array<IntVector, 4>, 4> mult_;
  IntVector one_;
  IntVector traces_;
  IntMatrix gram_;
};

// Isomorphism of the completion at a prime q (not dividing the discriminant and level)
// with M_2(Z_q), realized as left multiplication on the ideal O_q e for an idempotent e.
class Splitting {
 public:
  Splitting() = default;
  // variant selects among the admissible idempotents; different variants give different splittings.
  Splitting(const QuaternionOrder& order, unsigned q, int variant = 0);

  unsigned prime() const { return q_; }
  int variant() const { return variant_; }
  // Images of the basis modulo q^precision (entries in [0, q^precision)).
  std::array<IMat2, 4> basis_images(long precision) const;
  IMat2 image_mod(const IntVector& x, long precision) const;
  PMat2 image(const IntVector& x, long precision) const;

 private:
  void compute(long precision) const;
  QuaternionOrder order_;
  unsigned q_ = 0;
  int variant_ = 0;
  IntVector generator_;  // element with two distinct roots mod q
  mutable long cached_precision_ = 0;
  mutable std::array<IMat2, 4> cached_;
};

// Reduced-norm-n elements of the order (up to sign), optionally restricted by congruences on coordinates.
std::vector<IntVector> enumerate_norm(const QuaternionOrder& order, const mpz_class& n,
                                      const std::vector<Congruence>& congruences = {});

}  // namespace lop
