#include "lop/series.hpp"

#include <algorithm>

namespace lop {

PadicSeries series_mul(const PadicSeries& f, const PadicSeries& g, std::size_t order) {
  const unsigned p = f.empty() ? g.front().prime() : f.front().prime();
  long prec = 0;
  for (const auto& x : f) prec = std::max(prec, x.precision());
  for (const auto& x : g) prec = std::max(prec, x.precision());
  PadicSeries h(order + 1, PadicNumber::zero(p, prec + 1000));
  for (std::size_t i = 0; i < f.size() && i <= order; ++i) {
    if (f[i].is_zero() && f[i].precision() > prec + 500) continue;
    for (std::size_t j = 0; j < g.size() && i + j <= order; ++j) h[i + j] += f[i] * g[j];
  }
  return h;
}

bool in_sigma0(const PMat2& s) {
  if (!s.a.is_unit()) return false;
  if (!s.c.is_zero() && s.c.valuation() < 1) return false;
  if (s.b.valuation() < 0 || s.d.valuation() < 0) return false;
  if (s.det().is_zero()) return false;
  return true;
}

PadicSeries mobius_weight_substitute(const PadicSeries& f, const PMat2& s, long k, std::size_t order) {
  if (!in_sigma0(s)) throw DomainError("matrix is not in Sigma_0(p)");
  const unsigned p = s.prime();
  long prec = s.precision();
  for (const auto& x : f) prec = std::min(prec, x.precision());
  // 1/(a - cx) = a^{-1} sum (c x / a)^m
  PadicNumber ainv = s.a.inverse();
  PadicSeries inv(order + 1);
  PadicNumber ratio = s.c * ainv;
  PadicNumber term = ainv;
  for (std::size_t m = 0; m <= order; ++m) {
    inv[m] = term;
    term = term * ratio;
  }
  PadicSeries num{-s.b, s.d};
  PadicSeries y = series_mul(num, inv, order);
  // Horner: f(y)
  PadicSeries acc(order + 1, PadicNumber::zero(p, prec + 1000));
  for (std::size_t i = f.size(); i-- > 0;) {
    acc = series_mul(acc, y, order);
    acc[0] += f[i];
  }
  PadicSeries lin{s.a, -s.c};
  for (long i = 0; i < k; ++i) acc = series_mul(acc, lin, order);
  if (k != 0) {
    PadicNumber det = s.det();
    PadicNumber scale = det.pow(-(k / 2));
    for (auto& x : acc) x = x * scale;
  }
  return acc;
}

std::vector<std::vector<mpz_class>> sigma0_matrix(const PMat2& s, long k, std::size_t rows, std::size_t order, long W) {
  if (!in_sigma0(s)) throw DomainError("matrix is not in Sigma_0(p)");
  const unsigned p = s.prime();
  if (s.precision() < W) throw PrecisionError("sigma0_matrix: matrix known to insufficient precision");
  const mpz_class& mod = prime_power(p, W);
  auto red = [&](mpz_class& x) {
    x %= mod;
    if (x < 0) x += mod;
  };
  mpz_class a = s.a.lift() % mod, b = s.b.lift() % mod, c = s.c.lift() % mod, d = s.d.lift() % mod;
  mpz_class det = a * d - b * c;
  red(det);
  mpz_class ainv, detinv;
  if (!mpz_invert(ainv.get_mpz_t(), a.get_mpz_t(), mod.get_mpz_t())) throw DomainError("a is not a unit");
  if (!mpz_invert(detinv.get_mpz_t(), det.get_mpz_t(), mod.get_mpz_t()))
    throw DomainError("sigma0_matrix: determinant is not a unit");
  mpz_class scale;
  mpz_powm_ui(scale.get_mpz_t(), detinv.get_mpz_t(), static_cast<unsigned long>(k / 2), mod.get_mpz_t());
  std::vector<std::vector<mpz_class>> T(rows, std::vector<mpz_class>(order + 1));
  // row 0: scale * (a - c x)^k
  std::vector<mpz_class> row(order + 1, 0);
  row[0] = scale;
  for (long i = 0; i < k; ++i) {
    for (std::size_t m = order; m > 0; --m) {
      row[m] = row[m] * a - row[m - 1] * c;
      red(row[m]);
    }
    row[0] = row[0] * a;
    red(row[0]);
  }
  std::vector<mpz_class> tmp(order + 1);
  for (std::size_t i = 0; i < rows; ++i) {
    T[i] = row;
    if (i + 1 == rows) break;
    // multiply by (d x - b)
    for (std::size_t m = order; m > 0; --m) {
      tmp[m] = row[m - 1] * d - row[m] * b;
      red(tmp[m]);
    }
    tmp[0] = -row[0] * b;
    red(tmp[0]);
    // divide by (a - c x)
    row[0] = tmp[0] * ainv;
    red(row[0]);
    for (std::size_t m = 1; m <= order; ++m) {
      row[m] = (tmp[m] + c * row[m - 1]) * ainv;
      red(row[m]);
    }
  }
  return T;
}

}  // namespace lop
