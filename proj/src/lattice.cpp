#include "lop/lattice.hpp"

#include <cmath>
#include <functional>
#include <set>
#include <stdexcept>

namespace lop {

IntMatrix hermite_basis(IntMatrix rows, std::size_t dim) {
  std::size_t r = 0;
  const std::size_t ncols = dim;
  for (std::size_t c = 0; c < ncols && r < rows.size(); ++c) {
    // gcd-combine all rows >= r in column c into row r
    for (std::size_t i = r + 1; i < rows.size(); ++i) {
      if (rows[i][c] == 0) continue;
      mpz_class g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), rows[r][c].get_mpz_t(), rows[i][c].get_mpz_t());
      mpz_class a = rows[r][c] / g, b = rows[i][c] / g;
      for (std::size_t j = 0; j < ncols; ++j) {
        mpz_class x = rows[r][j], y = rows[i][j];
        rows[r][j] = s * x + t * y;
        rows[i][j] = -b * x + a * y;
      }
    }
    if (rows[r][c] == 0) continue;
    if (rows[r][c] < 0)
      for (auto& x : rows[r]) x = -x;
    // reduce rows above
    for (std::size_t i = 0; i < r; ++i) {
      mpz_class q;
      mpz_fdiv_q(q.get_mpz_t(), rows[i][c].get_mpz_t(), rows[r][c].get_mpz_t());
      if (q != 0)
        for (std::size_t j = 0; j < ncols; ++j) rows[i][j] -= q * rows[r][j];
    }
    ++r;
  }
  rows.resize(r);
  return rows;
}

IntMatrix congruence_sublattice(const IntMatrix& basis, const std::vector<Congruence>& conditions) {
  IntMatrix B = basis;
  const std::size_t dim = B.empty() ? 0 : B[0].size();
  for (const auto& cond : conditions) {
    const mpz_class& m = cond.modulus;
    std::vector<mpz_class> w(B.size());
    for (std::size_t i = 0; i < B.size(); ++i) {
      mpz_class s = 0;
      for (std::size_t j = 0; j < dim; ++j) s += cond.coefficients[j] * B[i][j];
      mpz_mod(s.get_mpz_t(), s.get_mpz_t(), m.get_mpz_t());
      w[i] = s;
    }
    // gcd of the values with m drives an elimination on the basis vectors
    std::size_t i0 = B.size();
    mpz_class best = m;
    for (std::size_t i = 0; i < B.size(); ++i) {
      if (w[i] == 0) continue;
      mpz_class g;
      mpz_gcd(g.get_mpz_t(), w[i].get_mpz_t(), m.get_mpz_t());
      if (g < best) {
        best = g;
        i0 = i;
      }
    }
    if (i0 == B.size()) continue;
    // modulus is a prime power, so the minimal gcd divides every value
    mpz_class mm = m / best;
    mpz_class u = w[i0] / best, uinv;
    mpz_invert(uinv.get_mpz_t(), u.get_mpz_t(), mm.get_mpz_t());
    IntMatrix nb;
    for (std::size_t i = 0; i < B.size(); ++i) {
      if (i == i0) continue;
      if (w[i] % best != 0) throw std::logic_error("congruence_sublattice: modulus is not a prime power");
      mpz_class q = (w[i] / best) * uinv;
      mpz_mod(q.get_mpz_t(), q.get_mpz_t(), mm.get_mpz_t());
      IntVector v = B[i];
      for (std::size_t j = 0; j < dim; ++j) v[j] -= q * B[i0][j];
      nb.push_back(v);
    }
    IntVector v = B[i0];
    for (auto& x : v) x *= mm;
    nb.push_back(v);
    B = hermite_basis(nb, dim);
  }
  return B;
}

mpz_class quadratic_value(const IntVector& v, const IntMatrix& gram) {
  mpz_class s = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) continue;
    mpz_class t = 0;
    for (std::size_t j = 0; j < v.size(); ++j) t += gram[i][j] * v[j];
    s += v[i] * t;
  }
  return s;
}

namespace {

mpz_class bilinear(const IntVector& x, const IntVector& y, const IntMatrix& G) {
  mpz_class s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) continue;
    mpz_class t = 0;
    for (std::size_t j = 0; j < y.size(); ++j) t += G[i][j] * y[j];
    s += x[i] * t;
  }
  return s;
}

}  // namespace

IntMatrix lll_reduce(IntMatrix b, const IntMatrix& G) {
  const std::size_t n = b.size();
  if (n == 0) return b;
  std::vector<std::vector<mpq_class>> mu(n, std::vector<mpq_class>(n));
  std::vector<mpq_class> Bn(n);
  auto gram_schmidt = [&]() {
    // exact Gram-Schmidt through the Gram matrix of the basis
    std::vector<std::vector<mpq_class>> r(n, std::vector<mpq_class>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        mpq_class s(bilinear(b[i], b[j], G));
        for (std::size_t k = 0; k < j; ++k) s -= mu[j][k] * r[i][k];
        r[i][j] = s;
        if (j < i) mu[i][j] = s / Bn[j];
      }
      Bn[i] = r[i][i];
    }
  };
  gram_schmidt();
  std::size_t k = 1;
  const mpq_class delta(3, 4);
  while (k < n) {
    for (std::size_t jj = k; jj-- > 0;) {
      mpq_class m = mu[k][jj];
      // round to nearest integer
      mpz_class q;
      mpq_class twice = 2 * m + 1;
      mpz_fdiv_q(q.get_mpz_t(), twice.get_num_mpz_t(), twice.get_den_mpz_t());
      mpz_fdiv_q_2exp(q.get_mpz_t(), q.get_mpz_t(), 1);
      if (q != 0) {
        for (std::size_t t = 0; t < b[k].size(); ++t) b[k][t] -= q * b[jj][t];
        for (std::size_t t = 0; t < jj; ++t) mu[k][t] -= q * mu[jj][t];
        mu[k][jj] -= q;
      }
    }
    if (Bn[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * Bn[k - 1]) {
      ++k;
    } else {
      std::swap(b[k], b[k - 1]);
      gram_schmidt();
      k = std::max<std::size_t>(k - 1, 1);
    }
  }
  return b;
}

std::vector<IntVector> short_vectors(const IntMatrix& basis, const IntMatrix& G, const mpz_class& bound) {
  const std::size_t n = basis.size();
  const std::size_t dim = n ? basis[0].size() : 0;
  std::vector<std::vector<long double>> g(n, std::vector<long double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g[i][j] = bilinear(basis[i], basis[j], G).get_d();
  // Cholesky-type decomposition Q(y) = sum_i q[i][i] (y_i + sum_{j>i} q[i][j] y_j)^2
  std::vector<std::vector<long double>> q = g;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      q[j][i] = q[i][j];
      q[i][j] = q[i][j] / q[i][i];
    }
    for (std::size_t k = i + 1; k < n; ++k)
      for (std::size_t l = k; l < n; ++l) q[k][l] -= q[k][i] * q[i][l];
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!(q[i][i] > 0)) throw std::runtime_error("short_vectors: form is not positive definite");
  const long double B = bound.get_d() * (1 + 1e-12L) + 1e-6L;
  std::set<IntVector> found;
  std::vector<long> y(n, 0);
  std::function<void(long, long double)> rec = [&](long i, long double remaining) {
    if (i < 0) {
      IntVector v(dim, 0);
      bool nonzero = false;
      for (std::size_t t = 0; t < n; ++t) {
        if (y[t] == 0) continue;
        nonzero = true;
        for (std::size_t s = 0; s < dim; ++s) v[s] += basis[t][s] * y[t];
      }
      if (!nonzero) return;
      if (quadratic_value(v, G) > bound) return;
      // canonical sign: first nonzero coordinate positive
      for (const auto& x : v)
        if (x != 0) {
          if (x < 0)
            for (auto& z : v) z = -z;
          break;
        }
      found.insert(v);
      return;
    }
    long double c = 0;
    for (std::size_t j = i + 1; j < n; ++j) c -= q[i][j] * y[j];
    long double r = std::sqrt(std::max<long double>(remaining, 0) / q[i][i]);
    long lo = static_cast<long>(std::ceil(c - r - 1e-9L)), hi = static_cast<long>(std::floor(c + r + 1e-9L));
    for (long t = lo; t <= hi; ++t) {
      y[i] = t;
      long double d = t - c;
      long double rem = remaining - q[i][i] * d * d;
      if (rem < -1e-6L * (1 + B)) continue;
      rec(i - 1, rem);
    }
    y[i] = 0;
  };
  rec(static_cast<long>(n) - 1, B);
  return {found.begin(), found.end()};
}

}  // namespace lop
