#pragma once

#include <vector>

#include "lop/matrix2.hpp"
#include "lop/unramified.hpp"

namespace lop {

// Truncated power series / polynomial: coefficients of x^0 .. x^order.
using PadicSeries = std::vector<PadicNumber>;
using UnramifiedSeries = std::vector<UnramifiedElement>;

PadicSeries series_mul(const PadicSeries& f, const PadicSeries& g, std::size_t order);

// True when a is a unit and p | c.
bool in_sigma0(const PMat2& s);

// (s . f)(x) = det(s)^{-k/2} (-cx + a)^k f((dx - b)/(-cx + a)) truncated at x^order.
PadicSeries mobius_weight_substitute(const PadicSeries& f, const PMat2& s, long k, std::size_t order);

// Integer matrix T with s . x^i = sum_m T[i][m] x^m (mod x^{order+1}, mod p^W),
// for i = 0..rows-1.  Requires s in Gamma_0(pZ_p) up to a unit determinant.
std::vector<std::vector<mpz_class>> sigma0_matrix(const PMat2& s, long k, std::size_t rows, std::size_t order, long W);

}  // namespace lop
