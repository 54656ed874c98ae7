#include <doctest.h>

#include <random>

#include "lop/cocycle.hpp"

using namespace lop;

namespace {

std::shared_ptr<const FundamentalDomain> make_domain(unsigned p, long nminus, long nplus = 1, int variant = 0) {
  auto B = build_algebra(nminus, p);
  auto O = QuaternionOrder::maximal(B);
  if (nplus > 1) O = O.eichler(nplus);
  return std::make_shared<const FundamentalDomain>(FundamentalDomain::compute(ArithmeticGroup(O, p, variant)));
}

// det^(-k/2) (a x + b)^i (c x + d)^(k - i) over Q
std::vector<std::vector<mpq_class>> action_oracle(const IMat2& g, long k) {
  auto mul = [](const std::vector<mpq_class>& f, const std::vector<mpq_class>& h) {
    std::vector<mpq_class> out(f.size() + h.size() - 1, 0);
    for (std::size_t i = 0; i < f.size(); ++i)
      for (std::size_t j = 0; j < h.size(); ++j) out[i + j] += f[i] * h[j];
    return out;
  };
  mpq_class scale = 1;
  for (long i = 0; i < k / 2; ++i) scale /= mpq_class(g.det());
  std::vector<std::vector<mpq_class>> R;
  for (long i = 0; i <= k; ++i) {
    std::vector<mpq_class> f{scale};
    for (long t = 0; t < i; ++t) f = mul(f, {mpq_class(g.b()), mpq_class(g.a())});
    for (long t = i; t < k; ++t) f = mul(f, {mpq_class(g.d()), mpq_class(g.c())});
    R.push_back(f);
  }
  return R;
}

bool vk_equal(const VkElement& a, const VkElement& b, long m) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!a[i].equals_mod(b[i], m)) return false;
  return true;
}

}  // namespace

TEST_CASE("weight-k action on V_k") {
  std::mt19937_64 rng(5);
  const unsigned p = 3;
  const long W = 30;
  for (long k : {0L, 2L, 4L}) {
    for (int t = 0; t < 10; ++t) {
      IMat2 g1(static_cast<long>(rng() % 19) - 9, static_cast<long>(rng() % 19) - 9,
               static_cast<long>(rng() % 19) - 9, static_cast<long>(rng() % 19) - 9);
      IMat2 g2(static_cast<long>(rng() % 19) - 9, static_cast<long>(rng() % 19) - 9,
               static_cast<long>(rng() % 19) - 9, static_cast<long>(rng() % 19) - 9);
      if (g1.det() == 0 || g2.det() == 0) continue;
      auto R = polynomial_action(PMat2::from_integer(p, g1, W), k);
      auto oracle = action_oracle(g1, k);
      for (long i = 0; i <= k; ++i)
        for (long m = 0; m <= k; ++m)
          CHECK(R(i, m).equals_mod(PadicNumber::from_rational(p, oracle[i][m], W), W - 10));
      VkElement w;
      for (long i = 0; i <= k; ++i) w.push_back(PadicNumber::from_integer(p, static_cast<long>(rng() % 100), W));
      auto P1 = PMat2::from_integer(p, g1, W), P2 = PMat2::from_integer(p, g2, W);
      CHECK(vk_equal(vk_act(P1, vk_act(P2, w)), vk_act(P1 * P2, w), W - 20));
      CHECK(vk_equal(vk_act(PMat2::from_integer(p, IMat2(7, 0, 0, 7), W), w), w, W));
    }
  }
}

TEST_CASE("weight-two cocycles count quotient-graph cycles") {
  for (auto [p, nminus] : {std::pair<unsigned, long>{3, 2}, {2, 3}, {2, 5}, {2, 7}, {5, 2}, {7, 2}, {2, 11}}) {
    auto fd = make_domain(p, nminus);
    CocycleSpace S(fd, 0, 30);
    long edges = static_cast<long>(fd->positive_edges().size());
    long vertices = static_cast<long>(fd->vertices().size());
    CHECK(static_cast<long>(S.dimension()) == edges - vertices + 1);
  }
}

TEST_CASE("cocycle space dimensions for small levels") {
  struct Row {
    unsigned p;
    long nminus, k;
    std::size_t dim;
  };
  for (Row r : {Row{3, 2, 2, 1}, Row{2, 3, 2, 1}, Row{2, 3, 4, 1}, Row{2, 3, 10, 3}, Row{2, 3, 14, 3},
                Row{2, 5, 2, 1}, Row{2, 5, 4, 3}, Row{2, 5, 16, 7}, Row{2, 7, 2, 2}, Row{2, 7, 6, 4}}) {
    CAPTURE(r.p);
    CAPTURE(r.nminus);
    CAPTURE(r.k);
    CocycleSpace S(make_domain(r.p, r.nminus), r.k, 40);
    CHECK(S.dimension() == r.dim);
  }
}

TEST_CASE("basis cocycles are harmonic and invariant") {
  std::mt19937_64 rng(3);
  for (auto [p, nminus, k] : {std::tuple<unsigned, long, long>{3, 2, 2}, {2, 3, 10}, {2, 5, 3 * 2}, {3, 2, 4}}) {
    auto fd = make_domain(p, nminus);
    const long W = 40;
    CocycleSpace S(fd, k, W);
    for (const auto& c : S.basis()) {
      CHECK(S.harmonicity_defect(c) >= W / 2);
      // star sums vanish at random vertices
      for (int t = 0; t < 8; ++t) {
        NormalizedVertex v = base_vertex(p);
        for (int s = 0; s < 1 + t % 5; ++s) v = neighbours(v)[rng() % (p + 1)];
        VkElement sum = vk_zero(p, k, W);
        for (const auto& e : star(v)) sum = vk_add(sum, S.value(c, e));
        CHECK(vk_valuation(sum) >= W / 2 - 10);
        // invariance under a random generator
        const auto& gens = fd->generators();
        const auto& g = gens[rng() % gens.size()];
        auto e = star(v)[rng() % (p + 1)];
        CHECK(vk_equal(S.value(c, fd->group().act(g, e)), S.act(g, S.value(c, e)), W / 2 - 10));
        CHECK(vk_equal(S.value(c, opposite(e)), vk_neg(S.value(c, e)), W / 2 - 10));
      }
    }
  }
}

TEST_CASE("p-new relation and Atkin-Lehner involutions") {
  for (auto [p, nminus, k] : {std::tuple<unsigned, long, long>{3, 2, 2}, {2, 3, 2}, {2, 7, 6}}) {
    auto fd = make_domain(p, nminus);
    const long W = 40;
    CocycleSpace S(fd, k, W);
    const mpz_class pk2 = prime_power(p, k / 2);
    for (const auto& c : S.basis())
      for (int j = 0; j < static_cast<int>(fd->edges().size()); ++j) {
        const PMat2 b = PMat2::from_integer(p, fd->edges()[j].edge.m, W + 10);
        VkElement phi = S.automorphic_value(c, b);
        VkElement up = S.automorphic_up(c, j);
        VkElement wp = S.automorphic_wp(c, j);
        VkElement target(phi.size()), minus_wp(phi.size());
        for (std::size_t i = 0; i < phi.size(); ++i) {
          target[i] = phi[i].mul_integer(pk2);
          minus_wp[i] = (-wp[i]).mul_integer(pk2);
        }
        CHECK(vk_equal(up, target, W / 2 - 10));
        CHECK(vk_equal(up, minus_wp, W / 2 - 10));
      }
    for (long d : {static_cast<long>(p), nminus}) {
      auto w = normalizer_element(fd->group(), d);
      auto M = S.transport_matrix(w);
      auto M2 = M * M;
      for (std::size_t a = 0; a < M.rows(); ++a)
        for (std::size_t b = 0; b < M.cols(); ++b)
          CHECK(M2(a, b).equals_mod(PadicNumber::from_integer(p, a == b ? 1 : 0, W), W / 2 - 10));
    }
  }
}

TEST_CASE("classical W_p sign for (2, 3) in weight 4") {
  // (p, N) = (2, 3), weight 4: one-dimensional with W_p eigenvalue +1
  auto fd = make_domain(2, 3);
  CocycleSpace S(fd, 2, 40);
  REQUIRE(S.dimension() == 1);
  auto M = S.transport_matrix(normalizer_element(fd->group(), 2));
  CHECK(M(0, 0).equals_mod(PadicNumber::from_integer(2, kAtkinLehnerSign, 40), 15));
}
