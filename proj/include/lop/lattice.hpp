#pragma once

#include <gmpxx.h>

#include <vector>

namespace lop {

using IntVector = std::vector<mpz_class>;
using IntMatrix = std::vector<IntVector>;  // row-major; lattice bases are lists of row vectors

// Row Hermite normal form of the lattice generated by the rows (full rank assumed for the output size).
IntMatrix hermite_basis(IntMatrix generators, std::size_t dim);

// Basis of {c in L : sum_i a_i c_i == 0 mod m} for each (a, m) condition.
struct Congruence {
  IntVector coefficients;
  mpz_class modulus;
};
IntMatrix congruence_sublattice(const IntMatrix& basis, const std::vector<Congruence>& conditions);

// LLL reduction (delta = 3/4) for the bilinear form with integer Gram matrix G.
IntMatrix lll_reduce(IntMatrix basis, const IntMatrix& gram);

// All vectors v of the lattice with v^T G v <= bound, up to sign, excluding 0.
std::vector<IntVector> short_vectors(const IntMatrix& basis, const IntMatrix& gram, const mpz_class& bound);

mpz_class quadratic_value(const IntVector& v, const IntMatrix& gram);

}  // namespace lop
