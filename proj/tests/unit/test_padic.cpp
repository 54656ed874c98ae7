#include <doctest.h>

#include <random>

#include "lop/linalg.hpp"
#include "lop/series.hpp"
#include "lop/unramified.hpp"

using namespace lop;

namespace {

PadicNumber Z(unsigned p, long n, long prec) { return PadicNumber::from_integer(p, n, prec); }

// Exact rational Gaussian elimination.
std::vector<mpq_class> rational_solve(std::vector<std::vector<mpq_class>> A, std::vector<mpq_class> b) {
  const std::size_t n = A.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (A[piv][c] == 0) ++piv;
    std::swap(A[piv], A[c]);
    std::swap(b[piv], b[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || A[r][c] == 0) continue;
      mpq_class f = A[r][c] / A[c][c];
      for (std::size_t j = c; j < n; ++j) A[r][j] -= f * A[c][j];
      b[r] -= f * b[c];
    }
  }
  for (std::size_t i = 0; i < n; ++i) b[i] /= A[i][i];
  return b;
}

// det(xI - A) by evaluation at n+1 integers and Lagrange interpolation.
std::vector<mpq_class> interpolated_charpoly(const std::vector<std::vector<long>>& A) {
  const std::size_t n = A.size();
  auto det = [&](long x) {
    std::vector<std::vector<mpq_class>> M(n, std::vector<mpq_class>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) M[i][j] = (i == j ? x : 0) - A[i][j];
    mpq_class d = 1;
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t piv = c;
      while (piv < n && M[piv][c] == 0) ++piv;
      if (piv == n) return mpq_class(0);
      if (piv != c) {
        std::swap(M[piv], M[c]);
        d = -d;
      }
      d *= M[c][c];
      for (std::size_t r = c + 1; r < n; ++r) {
        mpq_class f = M[r][c] / M[c][c];
        for (std::size_t j = c; j < n; ++j) M[r][j] -= f * M[c][j];
      }
    }
    return d;
  };
  std::vector<mpq_class> coeffs(n + 1, 0);
  for (std::size_t i = 0; i <= n; ++i) {
    // basis polynomial prod_{j != i} (x - j)/(i - j)
    std::vector<mpq_class> basis{1};
    mpq_class denom = 1;
    for (std::size_t j = 0; j <= n; ++j) {
      if (j == i) continue;
      std::vector<mpq_class> nb(basis.size() + 1, 0);
      for (std::size_t t = 0; t < basis.size(); ++t) {
        nb[t + 1] += basis[t];
        nb[t] -= basis[t] * static_cast<long>(j);
      }
      basis = nb;
      denom *= static_cast<long>(i) - static_cast<long>(j);
    }
    mpq_class yi = det(static_cast<long>(i));
    for (std::size_t t = 0; t <= n; ++t) coeffs[t] += yi * basis[t] / denom;
  }
  return coeffs;
}

}  // namespace

TEST_CASE("padic arithmetic and precision") {
  auto a = Z(3, 9, 10);
  CHECK(a.valuation() == 2);
  CHECK(a.precision() == 10);
  auto b = PadicNumber::from_rational(3, mpq_class(1, 3), 10);
  CHECK(b.valuation() == -1);
  CHECK((a * b).to_rational() == 3);
  auto c = a / Z(3, 3, 10);
  CHECK(c.precision() == 9);
  CHECK(c.to_rational() == 3);
  CHECK((Z(5, 7, 6) - Z(5, 7, 6)).is_zero());
  CHECK(Z(2, 1, 5).to_string() == "1 + O(2^5)");
  CHECK(PadicNumber::from_rational(3, mpq_class(-1), 4).lift() == 80);
}

TEST_CASE("iwasawa_log") {
  const unsigned p = 3;
  auto F = QuadraticField::standard(p);
  SUBCASE("log p = 0 and log 1 = 0") {
    CHECK(iwasawa_log(Z(p, 3, 20)).is_zero());
    CHECK(iwasawa_log(Z(p, 1, 20)).is_zero());
  }
  SUBCASE("log(1+3) against the partial-sum oracle") {
    const long M = 8;
    mpq_class s = 0;
    // terms with i - log_3(i) >= M + 2 are beyond the target precision
    for (long i = 1; i < 40; ++i) {
      mpq_class t(1);
      for (long j = 0; j < i; ++j) t *= 3;
      t /= i;
      s += (i % 2 ? 1 : -1) * t;
    }
    auto oracle = PadicNumber::from_rational(p, s, M);
    auto value = iwasawa_log(Z(p, 4, M));
    CHECK(value.equals_mod(oracle, M));
    CHECK(value.precision() >= M);
  }
  SUBCASE("additivity and Teichmuller vanishing in K_p") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 10; ++t) {
      UnramifiedElement x{F, Z(p, 1 + rng() % 1000, 15), Z(p, 3 * (rng() % 1000) + 1, 15)};
      UnramifiedElement y{F, Z(p, rng() % 1000, 15), Z(p, 3 * (rng() % 1000) + 2, 15)};
      if (x.valuation() != 0 || y.valuation() != 0) continue;
      auto lhs = iwasawa_log(x * y);
      auto rhs = iwasawa_log(x) + iwasawa_log(y);
      CHECK(lhs.a().equals_mod(rhs.a(), 14));
      CHECK(lhs.b().equals_mod(rhs.b(), 14));
      auto tm = teichmuller(x);
      CHECK(iwasawa_log(tm).is_zero());
    }
  }
}

TEST_CASE("half_trace") {
  for (unsigned p : {2u, 3u, 5u, 7u}) {
    auto F = QuadraticField::standard(p);
    CHECK(F.root_is_primitive());
    auto w = UnramifiedElement::generator(F, 20);
    CHECK(half_trace(w) == PadicNumber::from_rational(p, mpq_class(-F.c1, 2), 20));
    auto a = UnramifiedElement::from_base(F, Z(p, 17, 20));
    CHECK(half_trace(a) == Z(p, 17, 20));
    CHECK((w + w.conjugate()).b().is_zero());
  }
  auto F2 = QuadraticField::standard(2);
  auto w = UnramifiedElement::generator(F2, 20);
  CHECK(half_trace(w).precision() == 19);
}

TEST_CASE("teichmuller lift of the generator") {
  for (unsigned p : {2u, 3u, 5u}) {
    auto F = QuadraticField::standard(p);
    auto tau = teichmuller(UnramifiedElement::generator(F, 25));
    auto power = tau.pow(mpz_class(p * p - 1));
    CHECK(power.a().equals_mod(Z(p, 1, 25), 25));
    CHECK(power.b().equals_mod(PadicNumber::zero(p, 25), 25));
  }
}

TEST_CASE("solve_linear") {
  SUBCASE("identity") {
    auto I = PadicMatrix::identity(5, 3, 10);
    std::vector<PadicNumber> b{Z(5, 1, 10), Z(5, 2, 10), Z(5, 3, 10)};
    auto sol = solve_linear(I, b);
    CHECK(sol.kernel.empty());
    for (int i = 0; i < 3; ++i) CHECK(sol.solutions[0][i] == b[i]);
  }
  SUBCASE("pivot loss") {
    PadicMatrix A(3, 1, 1, 10);
    A(0, 0) = Z(3, 3, 10);
    auto sol = solve_linear(A, std::vector<PadicNumber>{Z(3, 9, 10)});
    CHECK(sol.solutions[0][0].to_rational() == 3);
    CHECK(sol.precision == 9);
  }
  SUBCASE("random 5x5 against exact rationals") {
    std::mt19937_64 rng(11);
    const long M = 12;
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<std::vector<long>> A(5, std::vector<long>(5));
      std::vector<std::vector<mpq_class>> Aq(5, std::vector<mpq_class>(5));
      std::vector<mpq_class> bq(5);
      std::vector<PadicNumber> b;
      for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
          A[i][j] = static_cast<long>(rng() % 41) - 20;
          Aq[i][j] = A[i][j];
        }
        long v = static_cast<long>(rng() % 41) - 20;
        bq[i] = v;
        b.push_back(Z(7, v, M));
      }
      auto P = PadicMatrix::from_integers(7, A, M);
      // skip singular samples
      mpq_class det_check = 0;
      try {
        auto exact = rational_solve(Aq, bq);
        auto sol = solve_linear(P, b);
        REQUIRE(sol.kernel.empty());
        for (int i = 0; i < 5; ++i) {
          auto e = PadicNumber::from_rational(7, exact[i], M + 20);
          CHECK(sol.solutions[0][i].equals_mod(e, sol.precision));
        }
        CHECK(sol.precision >= M - sol.pivot_loss - 2);
      } catch (const std::exception&) {
      }
    }
  }
  SUBCASE("inconsistent system") {
    auto A = PadicMatrix::from_integers(3, {{1, 0}, {1, 0}}, 10);
    CHECK_THROWS_AS(solve_linear(A, std::vector<PadicNumber>{Z(3, 1, 10), Z(3, 2, 10)}), InconsistentSystem);
  }
}

TEST_CASE("charpoly") {
  auto one = PadicMatrix::from_integers(5, {{7}}, 10);
  auto c1 = charpoly(one);
  CHECK(c1[0] == Z(5, -7, 10));
  CHECK(c1[1] == Z(5, 1, 10));
  auto diag = PadicMatrix::from_integers(5, {{2, 0}, {0, 3}}, 10);
  auto c2 = charpoly(diag);
  CHECK(c2[0] == Z(5, 6, 10));
  CHECK(c2[1] == Z(5, -5, 10));
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::vector<long>> A(4, std::vector<long>(4));
    for (auto& r : A)
      for (auto& x : r) x = static_cast<long>(rng() % 21) - 10;
    auto oracle = interpolated_charpoly(A);
    auto P = PadicMatrix::from_integers(3, A, 15);
    auto c = charpoly(P);
    auto ct = charpoly(P.transpose());
    for (int i = 0; i <= 4; ++i) {
      CHECK(c[i] == PadicNumber::from_rational(3, oracle[i], 15));
      CHECK(c[i] == ct[i]);
    }
  }
}

TEST_CASE("newton_slopes") {
  auto s = newton_slopes({Z(3, -9, 10), Z(3, 1, 10)});
  REQUIRE(s.size() == 1);
  CHECK(s[0].slope == 2);
  // (x - 2^-4)^2 (x - 2^-1) built from its roots
  const unsigned p = 2;
  auto r1 = PadicNumber::from_rational(p, mpq_class(3, 16), 40);
  auto r2 = PadicNumber::from_rational(p, mpq_class(5, 16), 40);
  auto r3 = PadicNumber::from_rational(p, mpq_class(7, 2), 40);
  auto one = Z(p, 1, 40);
  // expand (x - r1)(x - r2)(x - r3)
  std::vector<PadicNumber> c{-(r1 * r2 * r3), r1 * r2 + r1 * r3 + r2 * r3, -(r1 + r2 + r3), one};
  auto sl = newton_slopes(c);
  REQUIRE(sl.size() == 2);
  CHECK(sl[0].slope == -4);
  CHECK(sl[0].multiplicity == 2);
  CHECK(sl[1].slope == -1);
  CHECK(sl[1].multiplicity == 1);
}

TEST_CASE("mobius_weight_substitute") {
  const unsigned p = 3;
  const long prec = 12;
  PadicSeries f{Z(p, 2, prec), Z(p, 5, prec), Z(p, -1, prec)};
  auto I = PMat2::identity(p, prec);
  auto g = mobius_weight_substitute(f, I, 4, 6);
  for (std::size_t i = 0; i < 3; ++i) CHECK(g[i] == f[i]);
  auto u = PMat2{Z(p, 5, prec), Z(p, 0, prec), Z(p, 0, prec), Z(p, 5, prec)};
  auto h = mobius_weight_substitute(f, u, 4, 6);
  for (std::size_t i = 0; i < 3; ++i) CHECK(h[i] == f[i]);
  // f = x, s = [[1,1],[0,1]], k = 0  ->  x - 1
  PadicSeries x{Z(p, 0, prec), Z(p, 1, prec)};
  auto t = PMat2{Z(p, 1, prec), Z(p, 1, prec), Z(p, 0, prec), Z(p, 1, prec)};
  auto r = mobius_weight_substitute(x, t, 0, 4);
  CHECK(r[0] == Z(p, -1, prec));
  CHECK(r[1] == Z(p, 1, prec));
  CHECK(r[2].is_zero());
  SUBCASE("left action: s1 s2 . f = s1 . (s2 . f)") {
    PMat2 s1{Z(p, 2, prec), Z(p, 1, prec), Z(p, 3, prec), Z(p, 2, prec)};
    PMat2 s2{Z(p, 1, prec), Z(p, -4, prec), Z(p, 6, prec), Z(p, 7, prec)};
    const std::size_t N = 8;
    auto lhs = mobius_weight_substitute(f, s1 * s2, 2, N);
    auto rhs = mobius_weight_substitute(mobius_weight_substitute(f, s2, 2, N), s1, 2, N);
    for (std::size_t i = 0; i <= N; ++i) CHECK(lhs[i].equals_mod(rhs[i], prec - 4));
  }
  SUBCASE("integer kernel agrees with the series action") {
    PMat2 s{Z(p, 2, 30), Z(p, 1, 30), Z(p, 3, 30), Z(p, 2, 30)};
    const long k = 2;
    auto T = sigma0_matrix(s, k, 6, 8, 20);
    for (std::size_t i = 0; i < 6; ++i) {
      PadicSeries mono(i + 1, Z(p, 0, 30));
      mono[i] = Z(p, 1, 30);
      auto ref = mobius_weight_substitute(mono, s, k, 8);
      for (std::size_t m = 0; m <= 8; ++m) CHECK(ref[m].equals_mod(Z(p, 0, 30).mul_integer(0) + PadicNumber::from_integer(p, T[i][m], 20), 20));
    }
  }
}
