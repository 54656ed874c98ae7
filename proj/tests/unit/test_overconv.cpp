#include <doctest.h>

#include <random>

#include "lop/overconv.hpp"

using namespace lop;

namespace {

std::shared_ptr<const FundamentalDomain> make_domain(unsigned p, long nminus) {
  auto O = QuaternionOrder::maximal(build_algebra(nminus, p));
  return std::make_shared<const FundamentalDomain>(FundamentalDomain::compute(ArithmeticGroup(O, p)));
}

// p^(-dk/2) sum_a sum_{nu <= k} C(i, nu) p^(d nu) a^(i - nu) phi_c(g beta_a)(x^nu), beta_a = [[p^d, a], [0, 1]]
PadicNumber riemann_moment(const CocycleSpace& S, const HarmonicCocycle& c, const IMat2& g, long i, long d) {
  const unsigned p = S.prime();
  const long k = S.k();
  const long W = S.precision();
  const mpz_class pd = prime_power(p, d);
  PadicNumber total = PadicNumber::zero(p, W);
  for (mpz_class a = 0; a < pd; ++a) {
    IMat2 h = g * IMat2(pd, a, 0, 1);
    VkElement phi = S.automorphic_value(c, PMat2::from_integer(p, h, W + 20));
    for (long nu = 0; nu <= std::min(i, k); ++nu) {
      mpz_class coef, ap;
      mpz_bin_uiui(coef.get_mpz_t(), i, nu);
      mpz_pow_ui(ap.get_mpz_t(), a.get_mpz_t(), i - nu);
      total += phi[nu].mul_integer(coef * ap * prime_power(p, d * nu));
    }
  }
  return total.shifted(-d * k / 2);
}

}  // namespace

TEST_CASE("overconvergent lift of the (3, 2) weight-4 cocycle") {
  auto fd = make_domain(3, 2);
  CocycleSpace S(fd, 2, 60);
  REQUIRE(S.dimension() == 1);
  const auto& c = S.basis()[0];
  const long M = 10;
  auto form = lift_moments(S, c, M, 6);

  // specialization recovers the cocycle
  auto phi = automorphic_values(S, c);
  for (std::size_t j = 0; j < fd->edges().size(); ++j)
    for (long i = 0; i <= 2; ++i) CHECK(form.moment(static_cast<int>(j), i).equals_mod(phi[j][i], M));

  // fixed point of p^(-k/2) U_p within per-index precision
  UpTable table(*fd, form.modulus_exponent);
  UpOperator op(table, 3, 2, form.level, form.modulus_exponent);
  auto again = op.apply(form);
  for (std::size_t j = 0; j < form.moments.size(); ++j)
    for (long i = 0; i < static_cast<long>(form.moment_count()); ++i)
      CHECK(again.moment(static_cast<int>(j), i).equals_mod(form.moment(static_cast<int>(j), i),
                                                            again.stored_precision(i) - form.scale));

  // three extra iterations change nothing within precision
  LiftOptions more;
  more.extra_iterations = 3;
  auto longer = lift_moments(S, c, M, 6, more);
  for (std::size_t j = 0; j < form.moments.size(); ++j)
    for (long i = 0; i <= 2 + 6; ++i)
      CHECK(longer.moment(static_cast<int>(j), i).equals_mod(form.moment(static_cast<int>(j), i), M));

  // Riemann sums over balls of depth 3 agree modulo 3^3
  std::mt19937_64 rng(2);
  for (int t = 0; t < 6; ++t) {
    IMat2 g(static_cast<long>(rng() % 20) + 1, static_cast<long>(rng() % 20), 3 * static_cast<long>(rng() % 7),
            static_cast<long>(rng() % 20) + 1);
    if (g.det() == 0) continue;
    for (long i = 0; i <= 4; ++i) {
      PadicNumber m = moment(form, *fd, PMat2::from_integer(3, g, 80), i);
      PadicNumber r = riemann_moment(S, c, g, i, 3);
      CHECK(m.equals_mod(r, 3));
    }
  }
}

TEST_CASE("lifts of perturbed starting data converge") {
  auto fd = make_domain(2, 3);
  CocycleSpace S(fd, 4, 60);
  REQUIRE(S.dimension() == 1);
  const auto& c = S.basis()[0];
  const long level = 12;
  auto start = initial_lift(S, c, level);
  UpTable table(*fd, start.modulus_exponent);
  UpOperator op(table, 2, 4, level, start.modulus_exponent);
  std::mt19937_64 rng(9);
  auto other = start;
  for (auto& row : other.moments)
    for (std::size_t i = 5; i < row.size(); ++i) row[i] += static_cast<long>(rng() % 1000);
  auto a = start, b = other;
  for (long r = 0; r < level; ++r) {
    a = op.apply(a);
    b = op.apply(b);
    reset_low_moments(a, start);
    reset_low_moments(b, start);
    // difference lies in the r+1-st filtration step
    for (std::size_t j = 0; j < a.moments.size(); ++j)
      for (long s = 1; s <= level; ++s) {
        mpz_class diff = a.moments[j][4 + s] - b.moments[j][4 + s];
        if (diff != 0 && r + 1 - s + 1 > 0) CHECK(valuation_of(2, diff) >= std::min(r + 1 - s + 1, 40L));
      }
  }
}

TEST_CASE("initial lift averages over edge stabilizers") {
  auto fd = make_domain(3, 2);
  CocycleSpace S(fd, 2, 40);
  auto form = initial_lift(S, S.basis()[0], 5);
  for (std::size_t j = 0; j < fd->edges().size(); ++j) {
    if (fd->edges()[j].stabilizer.size() != 1) continue;
    // trivial stabilizer: truncation kills the high moments
    for (std::size_t i = 3; i < form.moment_count(); ++i) CHECK(form.moments[j][i] == 0);
  }
}
