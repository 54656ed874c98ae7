#include <doctest.h>

#include <random>

#include "lop/integrate.hpp"

using namespace lop;

namespace {

std::shared_ptr<const FundamentalDomain> make_domain(unsigned p, long nminus) {
  auto O = QuaternionOrder::maximal(build_algebra(nminus, p));
  return std::make_shared<const FundamentalDomain>(FundamentalDomain::compute(ArithmeticGroup(O, p)));
}

bool same(const UnramifiedElement& x, const UnramifiedElement& y, long m) {
  return x.a().equals_mod(y.a(), m) && x.b().equals_mod(y.b(), m);
}

// word in the generators of length n
QuatElem random_word(const ArithmeticGroup& G, const std::vector<QuatElem>& gens, std::mt19937_64& rng, int n) {
  QuatElem x = G.identity();
  for (int i = 0; i < n; ++i) {
    const auto& g = gens[rng() % gens.size()];
    x = G.multiply(x, rng() % 2 ? g : G.inverse(g));
  }
  return x;
}

struct Setup {
  std::shared_ptr<const FundamentalDomain> fd;
  std::unique_ptr<CocycleSpace> space;
  BasePoint tau;
  OverconvergentForm form;
  long M;
};

// lift deep enough for paths from tau to the given points
Setup make_setup(unsigned p, long nminus, long k, long M) {
  Setup s;
  s.fd = make_domain(p, nminus);
  s.space = std::make_unique<CocycleSpace>(s.fd, k, 60);
  s.M = M;
  s.tau = base_point(p, M + 40);
  const long depth = 6;
  s.form = lift_moments(*s.space, s.space->basis()[0], M, extra_moments_for(p, k, depth, M));
  return s;
}

}  // namespace

TEST_CASE("base points are Teichmuller generators reducing to v0") {
  for (unsigned p : {2u, 3u, 5u, 7u}) {
    for (int variant = 0; variant < 2; ++variant) {
      BasePoint b = base_point(p, 30, variant);
      CHECK(b.tau.valuation() == 0);
      CHECK(!b.tau.b().is_zero());
      CHECK(b.tau.b().valuation() == 0);
      UnramifiedElement q = b.tau.pow(mpz_class(p) * p - 1);
      UnramifiedElement one = UnramifiedElement::from_base(b.tau.field(), PadicNumber::from_integer(p, 1, 30));
      CHECK(same(q, one, 30));
      // residue generates F_{p^2}^x: no proper power is 1
      for (unsigned d = 1; d < p * p - 1; ++d)
        if ((p * p - 1) % d == 0) CHECK(!same(b.tau.pow(mpz_class(d)), one, 1));
      CHECK(reduction(b.tau) == base_vertex(p));
      CHECK(reduction(b.conjugate) == base_vertex(p));
    }
    CHECK(!same(base_point(p, 20, 0).tau, base_point(p, 20, 1).tau, 1));
  }
}

TEST_CASE("reduction is equivariant") {
  std::mt19937_64 rng(4);
  for (unsigned p : {2u, 3u, 5u}) {
    BasePoint b = base_point(p, 40);
    for (int t = 0; t < 25; ++t) {
      IMat2 g(static_cast<long>(rng() % 50) - 25, static_cast<long>(rng() % 50) - 25,
              static_cast<long>(rng() % 50) - 25, static_cast<long>(rng() % 50) - 25);
      if (g.det() == 0) continue;
      // lattice criterion: g v0 normalized directly from the matrix
      NormalizedVertex expected = normalize_vertex(p, g);
      CHECK(reduction(mobius(PMat2::from_integer(p, g, 40), b.tau)) == expected);
    }
  }
  auto fd = make_domain(3, 2);
  const auto& G = fd->group();
  BasePoint b = base_point(3, 40);
  for (int t = 0; t < 20; ++t) {
    QuatElem x = random_word(G, fd->generators(), rng, 1 + t % 4);
    CHECK(reduction(translate(G, x, b.tau)) == G.act(x, base_vertex(3)));
  }
}

TEST_CASE("coverings partition the projective line") {
  std::mt19937_64 rng(8);
  auto fd = make_domain(3, 2);
  const auto& G = fd->group();
  CocycleSpace S(fd, 2, 40);
  const auto& c = S.basis()[0];
  BasePoint b = base_point(3, 40);
  CHECK(covering(b.tau, b.tau).size() == 4);
  for (int t = 0; t < 15; ++t) {
    QuatElem x = random_word(G, fd->generators(), rng, 1 + t % 4);
    UnramifiedElement end = translate(G, x, b.tau);
    auto cov = covering(b.tau, end);
    const long n = G.act(x, base_vertex(3)).distance();
    CHECK(static_cast<long>(cov.size()) == (n == 0 ? 4 : 2 * 3 + (n - 1) * 2));
    // total mass of every polynomial vanishes
    VkElement sum = vk_zero(3, 2, 40);
    for (const auto& e : cov) sum = vk_add(sum, S.value(c, e));
    CHECK(vk_valuation(sum) >= 15);
  }
}

TEST_CASE("integrand expansions") {
  std::mt19937_64 rng(12);
  const unsigned p = 3;
  const long k = 4;
  auto fd = make_domain(p, 2);
  const auto& G = fd->group();
  BasePoint b = base_point(p, 60);
  for (int t = 0; t < 6; ++t) {
    QuatElem x = random_word(G, fd->generators(), rng, 1 + t % 3);
    UnramifiedElement end = translate(G, x, b.tau);
    for (const auto& e : covering(b.tau, end)) {
      PMat2 g = PMat2::from_integer(p, e.m, 80);
      const long d = valuation_of(p, e.m.det());
      for (long m = 0; m <= k; ++m) {
        auto f = integrand_series(m, g, b.tau, end, k, 30);
        auto r = integrand_series(m, g, end, b.tau, k, 30);
        auto z = integrand_series(m, g, b.tau, b.tau, k, 30);
        for (std::size_t i = 0; i < f.size(); ++i) {
          CHECK(same(f[i], -r[i], 25));
          CHECK(z[i].valuation() >= 25);
          if (!f[i].is_zero() && i > 0) CHECK(f[i].valuation() >= coefficient_floor(p, k, d, static_cast<long>(i)));
          if (i == 0 && !f[0].is_zero()) CHECK(f[0].valuation() >= -(k / 2) * d);
        }
      }
    }
  }
}

TEST_CASE("line integrals") {
  std::mt19937_64 rng(21);
  Setup s = make_setup(3, 2, 2, 8);
  const auto& fd = *s.fd;
  const auto& G = fd.group();
  const UnramifiedElement& tau = s.tau.tau;
  const auto deep = lift_moments(*s.space, s.space->basis()[0], 2 * s.M, extra_moments_for(3, 2, 6, 2 * s.M));

  // empty path
  for (long m = 0; m <= 2; ++m) CHECK(coleman_integral(s.form, fd, m, tau, tau, s.M).valuation() >= s.M);

  for (int t = 0; t < 4; ++t) {
    QuatElem x = random_word(G, fd.generators(), rng, 1 + t % 2);
    QuatElem y = random_word(G, fd.generators(), rng, 1);
    UnramifiedElement t2 = translate(G, x, tau);
    UnramifiedElement t3 = translate(G, y, tau);
    PathIntegral p12(fd, 2, tau, t2, s.M, s.form.scale);
    PathIntegral p23(fd, 2, t2, t3, s.M, s.form.scale);
    PathIntegral p13(fd, 2, tau, t3, s.M, s.form.scale);
    auto a = p12.evaluate(s.form), bb = p23.evaluate(s.form), cc = p13.evaluate(s.form);
    for (std::size_t m = 0; m < a.size(); ++m) CHECK(same(a[m] + bb[m], cc[m], s.M - 1));

    // conjugate endpoints give the conjugate integral
    PathIntegral conj(fd, 2, tau.conjugate(), t2.conjugate(), s.M, s.form.scale);
    auto ac = conj.evaluate(s.form);
    for (std::size_t m = 0; m < a.size(); ++m) CHECK(same(ac[m], a[m].conjugate(), s.M - 1));

    // doubling the truncation changes no digit
    PathIntegral longer(fd, 2, tau, t2, 2 * s.M, deep.scale);
    PathIntegral shorter(fd, 2, tau, t2, s.M, deep.scale);
    auto al = longer.evaluate(deep), as = shorter.evaluate(deep);
    for (std::size_t m = 0; m < a.size(); ++m) {
      CHECK(same(al[m], as[m], s.M));
      CHECK(same(as[m], a[m], s.M));
    }
  }
}

TEST_CASE("polynomials integrate to zero over the covering") {
  Setup s = make_setup(3, 2, 2, 8);
  const auto& fd = *s.fd;
  std::mt19937_64 rng(3);
  for (int t = 0; t < 4; ++t) {
    QuatElem x = random_word(fd.group(), fd.generators(), rng, 1 + t);
    UnramifiedElement end = translate(fd.group(), x, s.tau.tau);
    for (long m = 0; m <= 2; ++m) {
      PadicNumber total = PadicNumber::zero(3, s.M);
      for (const auto& e : covering(s.tau.tau, end)) {
        PMat2 g = PMat2::from_integer(3, e.m, s.form.modulus_exponent + 40);
        auto R = polynomial_action(g, 2);
        auto mom = moments(s.form, fd, g, 3);
        for (long i = 0; i <= 2; ++i) total += R(static_cast<std::size_t>(m), static_cast<std::size_t>(i)) * mom[i];
      }
      CHECK(total.valuation() >= s.M - 2);
    }
  }
}

TEST_CASE("lambda is a cocycle") {
  std::mt19937_64 rng(30);
  Setup s = make_setup(3, 2, 2, 8);
  const auto& fd = *s.fd;
  const auto& G = fd.group();
  const auto& S = *s.space;
  VkElement zero = lambda_value(s.form, fd, G.identity(), s.tau, s.M);
  CHECK(vk_valuation(zero) >= s.M);
  const auto& gens = fd.generators();
  for (int t = 0; t < 5; ++t) {
    QuatElem g = gens[rng() % gens.size()], h = gens[rng() % gens.size()];
    VkElement lg = lambda_value(s.form, fd, g, s.tau, s.M);
    VkElement lh = lambda_value(s.form, fd, h, s.tau, s.M);
    VkElement lgh = lambda_value(s.form, fd, G.multiply(g, h), s.tau, s.M);
    VkElement rhs = vk_add(S.act(g, lh), lg);
    CHECK(vk_valuation(vk_sub(lgh, rhs)) >= s.M - 2);
  }
}
