#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lop/integrate.hpp"

namespace lop {

// psi^v(c)(gamma): sum of c over the directed edges of the geodesic v -> gamma v.
VkElement psi_value(const CocycleSpace& space, const HarmonicCocycle& c, const QuatElem& gamma,
                    const NormalizedVertex& v);

struct LOptions {
  int base_point_variant = 0;
  // 0: v0, otherwise the (variant - 1)-st neighbour of v0
  int base_vertex_variant = 0;
  long guard_digits = 4;
};

struct LMatrix {
  // column i: coordinates of lambda(c_i) in the basis psi(c_l), modulo coboundaries
  PadicMatrix matrix;
  std::vector<PadicNumber> charpoly;  // constant term first, monic
  long precision = 0;                 // certified absolute precision of the entries
  long lift_scale = 0;
  long lift_level = 0;
};

// Precision of the cocycle basis needed to lift to the given target precision.
long cocycle_precision_for(const FundamentalDomain& domain, long k, long precision);

LMatrix l_matrix(const CocycleSpace& space, long precision, const LOptions& options = {});
// Same with respect to an arbitrary basis of the cocycle space.
LMatrix l_matrix(const CocycleSpace& space, const std::vector<HarmonicCocycle>& basis, long precision,
                 const LOptions& options = {});

// Eigenvalue with the given simple Newton slope (an integer), refined by Newton iteration.
PadicNumber simple_root(const std::vector<PadicNumber>& charpoly, const NewtonSlope& slope);

// Atkin-Lehner involution at d (d | pN) in the classical normalization: the quaternionic transport
// changes sign at every prime dividing gcd(d, pN^-).
PadicMatrix atkin_lehner_matrix(const CocycleSpace& space, long d, long nminus);

// Eigenspace of an involution M for eigenvalue eps: basis vectors as columns.
PadicMatrix involution_eigenspace(const PadicMatrix& M, int eps, long precision);
// Matrix of A restricted to the A-stable subspace spanned by the columns of V.
PadicMatrix restrict_to(const PadicMatrix& A, const PadicMatrix& V, long precision);

struct SlopeRow {
  long weight = 0;
  std::size_t dimension = 0;
  std::vector<NewtonSlope> slopes;        // all of them
  std::vector<NewtonSlope> slopes_plus;   // W_N = +1
  std::vector<NewtonSlope> slopes_minus;  // W_N = -1
  long wp_minus = 0, wp_plus = 0;         // multiplicities of the W_p eigenvalues -1, +1
  long precision = 0;
  bool skipped = false;
  std::string note;
};

SlopeRow slope_row(const CocycleSpace& space, long nminus, long nplus, long precision, const LOptions& options = {});

struct LInvariant {
  std::optional<PadicNumber> value;  // when some eigenvalue is a simple root in Q_p
  std::vector<PadicNumber> simple_roots;
  LMatrix data;
  std::vector<NewtonSlope> slopes;
};

LInvariant l_invariant(const CocycleSpace& space, long precision, const LOptions& options = {});

// "-4" or "1/2" with the multiplicity as a subscript-free suffix: "-4_2".
std::string format_slope(const NewtonSlope& s);

}  // namespace lop
