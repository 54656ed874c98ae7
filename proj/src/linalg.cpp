#include "lop/linalg.hpp"

#include <algorithm>
#include <numeric>

namespace lop {

PadicMatrix::PadicMatrix(unsigned p, std::size_t rows, std::size_t cols, long precision)
    : p_(p), rows_(rows), cols_(cols), data_(rows * cols, PadicNumber::zero(p, precision)) {}

PadicMatrix PadicMatrix::identity(unsigned p, std::size_t n, long precision) {
  PadicMatrix m(p, n, n, precision);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = PadicNumber::from_integer(p, 1, precision);
  return m;
}

PadicMatrix PadicMatrix::from_integers(unsigned p, const std::vector<std::vector<long>>& rows, long precision) {
  PadicMatrix m(p, rows.size(), rows.empty() ? 0 : rows[0].size(), precision);
  for (std::size_t i = 0; i < m.rows_; ++i)
    for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = PadicNumber::from_integer(p, rows[i][j], precision);
  return m;
}

PadicMatrix PadicMatrix::operator*(const PadicMatrix& o) const {
  if (cols_ != o.rows_) throw DomainError("matrix shape mismatch");
  PadicMatrix r(p_, rows_, o.cols_, precision() + o.precision() + 1000);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < o.cols_; ++j) {
      PadicNumber s = (*this)(i, 0) * o(0, j);
      for (std::size_t l = 1; l < cols_; ++l) s += (*this)(i, l) * o(l, j);
      r(i, j) = s;
    }
  return r;
}

PadicMatrix PadicMatrix::operator+(const PadicMatrix& o) const {
  PadicMatrix r = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] += o.data_[i];
  return r;
}

PadicMatrix PadicMatrix::operator-(const PadicMatrix& o) const {
  PadicMatrix r = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] -= o.data_[i];
  return r;
}

PadicMatrix PadicMatrix::transpose() const {
  PadicMatrix r(p_, cols_, rows_, 0);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

std::vector<PadicNumber> PadicMatrix::apply(const std::vector<PadicNumber>& v) const {
  std::vector<PadicNumber> out;
  out.reserve(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    PadicNumber s = (*this)(i, 0) * v[0];
    for (std::size_t j = 1; j < cols_; ++j) s += (*this)(i, j) * v[j];
    out.push_back(s);
  }
  return out;
}

long PadicMatrix::precision() const {
  long m = LONG_MAX / 4;
  for (const auto& x : data_) m = std::min(m, x.precision());
  return m;
}

long PadicMatrix::min_valuation() const {
  long m = LONG_MAX / 4;
  for (const auto& x : data_)
    if (!x.is_zero()) m = std::min(m, x.valuation());
  return m;
}

namespace {

bool negligible(const PadicNumber& x, long threshold) { return x.is_zero() || x.valuation() >= threshold; }

}  // namespace

LinearSolution solve_linear(const PadicMatrix& A, const PadicMatrix& B, long zero_threshold) {
  const std::size_t m = A.rows(), n = A.cols(), q = B.cols();
  if (B.rows() != m) throw DomainError("solve_linear: shape mismatch");
  const unsigned p = A.prime();
  // working copy [A | B]
  std::vector<std::vector<PadicNumber>> W(m, std::vector<PadicNumber>(n + q));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) W[i][j] = A(i, j);
    for (std::size_t j = 0; j < q; ++j) W[i][n + j] = B(i, j);
  }
  std::vector<std::size_t> pivot_col;
  LinearSolution out;
  std::vector<bool> used_col(n, false);
  std::size_t r = 0;
  for (; r < std::min(m, n); ++r) {
    long best = LONG_MAX;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = r; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (used_col[j] || negligible(W[i][j], zero_threshold)) continue;
        if (W[i][j].valuation() < best) {
          best = W[i][j].valuation();
          bi = i;
          bj = j;
        }
      }
    if (best == LONG_MAX) break;
    std::swap(W[r], W[bi]);
    used_col[bj] = true;
    pivot_col.push_back(bj);
    out.pivot_loss += best;
    PadicNumber inv = W[r][bj].inverse();
    for (std::size_t j = 0; j < n + q; ++j) W[r][j] = W[r][j] * inv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r || W[i][bj].is_zero()) continue;
      PadicNumber f = W[i][bj];
      for (std::size_t j = 0; j < n + q; ++j) {
        if (W[r][j].is_zero() && W[r][j].precision() > W[i][j].precision() + 1000) continue;
        W[i][j] = W[i][j] - f * W[r][j];
      }
    }
  }
  out.rank = r;
  for (std::size_t i = r; i < m; ++i)
    for (std::size_t j = 0; j < q; ++j)
      if (!negligible(W[i][n + j], zero_threshold))
        throw InconsistentSystem("linear system inconsistent at working precision", W[i][n + j].valuation());
  long prec = LONG_MAX / 4;
  for (std::size_t j = 0; j < q; ++j) {
    std::vector<PadicNumber> x(n, PadicNumber::zero(p, LONG_MAX / 8));
    for (std::size_t i = 0; i < r; ++i) {
      x[pivot_col[i]] = W[i][n + j];
      prec = std::min(prec, W[i][n + j].precision());
    }
    out.solutions.push_back(std::move(x));
  }
  for (std::size_t f = 0; f < n; ++f) {
    if (used_col[f]) continue;
    long kp = A.precision();
    for (std::size_t i = 0; i < r; ++i) kp = std::min(kp, W[i][f].precision());
    std::vector<PadicNumber> v(n, PadicNumber::zero(p, kp));
    v[f] = PadicNumber::from_integer(p, 1, kp);
    for (std::size_t i = 0; i < r; ++i) v[pivot_col[i]] = -W[i][f];
    out.kernel.push_back(std::move(v));
  }
  out.precision = prec;
  // free variables are exact zeros: give them the common precision
  for (auto& x : out.solutions)
    for (auto& e : x)
      if (e.is_zero() && e.precision() > prec) e = PadicNumber::zero(p, prec);
  return out;
}

LinearSolution solve_linear(const PadicMatrix& A, const std::vector<PadicNumber>& b, long zero_threshold) {
  PadicMatrix B(A.prime(), b.size(), 1, 0);
  for (std::size_t i = 0; i < b.size(); ++i) B(i, 0) = b[i];
  return solve_linear(A, B, zero_threshold);
}

std::vector<PadicNumber> charpoly(const PadicMatrix& A) {
  const std::size_t n = A.rows();
  if (A.cols() != n) throw DomainError("charpoly of a non-square matrix");
  const unsigned p = A.prime();
  const long big = A.precision() + 1000;
  auto one = PadicNumber::from_integer(p, 1, big);
  // v holds coefficients from the leading one downwards
  std::vector<PadicNumber> v{one};
  for (std::size_t k = 1; k <= n; ++k) {
    // A_{k-1} leading block, c = A[0..k-2][k-1], r = A[k-1][0..k-2]
    std::vector<PadicNumber> t(k + 1, PadicNumber::zero(p, big));
    t[0] = one;
    t[1] = -A(k - 1, k - 1);
    std::vector<PadicNumber> w(k - 1);
    for (std::size_t i = 0; i + 1 < k; ++i) w[i] = A(i, k - 1);
    for (std::size_t m = 2; m <= k; ++m) {
      PadicNumber s = PadicNumber::zero(p, big);
      for (std::size_t i = 0; i + 1 < k; ++i) s += A(k - 1, i) * w[i];
      t[m] = -s;
      if (m < k) {
        std::vector<PadicNumber> nw(k - 1, PadicNumber::zero(p, big));
        for (std::size_t i = 0; i + 1 < k; ++i)
          for (std::size_t j = 0; j + 1 < k; ++j) nw[i] += A(i, j) * w[j];
        w = std::move(nw);
      }
    }
    std::vector<PadicNumber> nv(k + 1, PadicNumber::zero(p, big));
    for (std::size_t i = 0; i <= k; ++i)
      for (std::size_t j = 0; j < k && j <= i; ++j) nv[i] += t[i - j] * v[j];
    v = std::move(nv);
  }
  std::reverse(v.begin(), v.end());
  return v;
}

std::vector<NewtonSlope> newton_slopes(const std::vector<PadicNumber>& c) {
  const long n = static_cast<long>(c.size()) - 1;
  if (n < 1) return {};
  if (c[n].is_zero()) throw PrecisionError("leading coefficient indistinguishable from 0");
  // points with known valuation
  std::vector<long> xs;
  for (long i = 0; i <= n; ++i)
    if (!c[i].is_zero()) xs.push_back(i);
  if (xs.front() != 0) throw PrecisionError("constant coefficient indistinguishable from 0");
  // lower hull by monotone chain
  std::vector<long> hull;
  auto val = [&](long i) { return mpq_class(c[i].valuation()); };
  for (long i : xs) {
    while (hull.size() >= 2) {
      long a = hull[hull.size() - 2], b = hull.back();
      // remove b if it lies on or above segment a -> i
      mpq_class lhs = (val(b) - val(a)) * (i - a);
      mpq_class rhs = (val(i) - val(a)) * (b - a);
      if (lhs >= rhs) hull.pop_back();
      else break;
    }
    hull.push_back(i);
  }
  // coefficients only known to be small must lie on or above the hull
  for (long i = 0; i <= n; ++i) {
    if (!c[i].is_zero()) continue;
    auto it = std::upper_bound(hull.begin(), hull.end(), i);
    long b = *it, a = *(it - 1);
    mpq_class h = val(a) + (val(b) - val(a)) * mpq_class(i - a, b - a);
    if (mpq_class(c[i].precision()) < h)
      throw PrecisionError("Newton polygon undecidable: coefficient " + std::to_string(i) + " lacks precision");
  }
  std::vector<NewtonSlope> out;
  for (std::size_t s = 1; s < hull.size(); ++s) {
    long a = hull[s - 1], b = hull[s];
    NewtonSlope ns;
    ns.slope = -(val(b) - val(a)) / mpq_class(b - a);
    ns.slope.canonicalize();
    ns.multiplicity = b - a;
    out.push_back(ns);
  }
  std::sort(out.begin(), out.end(), [](const NewtonSlope& x, const NewtonSlope& y) { return x.slope < y.slope; });
  return out;
}

}  // namespace lop
