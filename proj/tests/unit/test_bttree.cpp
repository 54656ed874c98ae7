#include <doctest.h>

#include <map>
#include <queue>
#include <random>
#include <set>

#include "lop/bttree.hpp"

using namespace lop;

namespace {

// g^{-1} h in Q_p^x Gamma_0(pZ_p) (edges) or Q_p^x GL_2(Z_p) (vertices), from scratch.
bool same_coset(unsigned p, const IMat2& g, const IMat2& h, bool edge) {
  IMat2 k = g.adjugate() * h;
  long m = LONG_MAX;
  for (const auto& x : k.e)
    if (x != 0) m = std::min(m, valuation_of(p, x));
  long vd = valuation_of(p, k.det());
  if (vd != 2 * m) return false;
  if (!edge) return true;
  // lower-left entry divisible by p^(m+1)
  return k.c() == 0 || valuation_of(p, k.c()) >= m + 1;
}

IMat2 random_gamma0(unsigned p, std::mt19937_64& rng) {
  IMat2 s;
  for (int t = 0; t < 4; ++t) {
    long x = static_cast<long>(rng() % 7) - 3;
    long y = static_cast<long>(rng() % 5) - 2;
    s = s * IMat2(1, x, 0, 1) * IMat2(1, 0, static_cast<long>(p) * y, 1);
  }
  long u1 = 1 + static_cast<long>(p) * static_cast<long>(rng() % 3);
  long u2 = static_cast<long>(p) - 1;
  return s * IMat2(u1, 0, 0, u2);
}

IMat2 random_matrix(std::mt19937_64& rng, long range) {
  while (true) {
    IMat2 g(static_cast<long>(rng() % range) - range / 2, static_cast<long>(rng() % range) - range / 2,
            static_cast<long>(rng() % range) - range / 2, static_cast<long>(rng() % range) - range / 2);
    if (g.det() != 0) return g;
  }
}

std::optional<mpq_class> random_point(unsigned p, std::mt19937_64& rng) {
  if (rng() % 20 == 0) return std::nullopt;
  long num = static_cast<long>(rng() % 2001) - 1000;
  long e = static_cast<long>(rng() % 5);
  mpq_class x(num, prime_power(p, e));
  x.canonicalize();
  return x;
}

}  // namespace

TEST_CASE("vertex and edge normalization basics") {
  for (unsigned p : {2u, 3u, 5u}) {
    CHECK(normalize_vertex(p, IMat2()) == base_vertex(p));
    CHECK(normalize_edge(p, IMat2()) == base_edge(p));
    CHECK(normalize_edge(p, IMat2(p, 0, 0, p)) == base_edge(p));
    NormalizedVertex v1 = normalize_vertex(p, g0_matrix(p));
    CHECK(v1.distance() == 1);
    CHECK(source(base_edge(p)) == v1);
    CHECK(target(base_edge(p)) == base_vertex(p));
    // star of v0: p+1 distinct edges, pairwise inequivalent by the coset oracle
    std::vector<IMat2> raw;
    for (unsigned j = 0; j < p; ++j) raw.push_back(alpha_matrix(p, j));
    raw.push_back(g0_matrix(p));
    std::set<NormalizedEdge> forms;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      forms.insert(normalize_edge(p, raw[i]));
      for (std::size_t j = i + 1; j < raw.size(); ++j) CHECK_FALSE(same_coset(p, raw[i], raw[j], true));
    }
    CHECK(forms.size() == p + 1);
    auto nb = neighbours(base_vertex(p));
    std::set<NormalizedVertex> nbs(nb.begin(), nb.end());
    CHECK(nbs.size() == p + 1);
    for (const auto& v : nb) CHECK(v.distance() == 1);
  }
}

TEST_CASE("normalization is constant on cosets and idempotent") {
  std::mt19937_64 rng(1234);
  for (unsigned p : {2u, 3u, 5u}) {
    for (int t = 0; t < 100; ++t) {
      IMat2 g = random_matrix(rng, 60);
      IMat2 s = random_gamma0(p, rng);
      long e = static_cast<long>(rng() % 3);
      IMat2 gs = g * s * IMat2(prime_power(p, e), 0, 0, prime_power(p, e));
      NormalizedEdge n1 = normalize_edge(p, g), n2 = normalize_edge(p, gs);
      CHECK(n1 == n2);
      CHECK(normalize_edge(p, n1.m) == n1);
      CHECK(same_coset(p, g, n1.m, true));
      CHECK(normalize_vertex(p, g) == normalize_vertex(p, gs));
      CHECK(same_coset(p, g, normalize_vertex(p, g).m, false));
      // witness: g u sigma = g_i
      long prec = 40;
      auto w = normalize_edge(PMat2::from_integer(p, g, prec));
      PMat2 lhs = (PMat2::from_integer(p, g, prec) * w.sigma).shifted(w.u_exponent);
      CHECK(lhs.equals_mod(PMat2::from_integer(p, n1.m, prec), 20));
      CHECK(w.sigma.det().valuation() == 0);
      CHECK(w.sigma.c.valuation() >= 1);
      CHECK(opposite(opposite(n1)) == n1);
      CHECK(source(opposite(n1)) == target(n1));
    }
  }
}

TEST_CASE("distance agrees with breadth-first search") {
  for (unsigned p : {2u, 3u}) {
    std::map<NormalizedVertex, long> depth;
    std::queue<NormalizedVertex> q;
    depth[base_vertex(p)] = 0;
    q.push(base_vertex(p));
    while (!q.empty()) {
      auto v = q.front();
      q.pop();
      if (depth[v] == 4) continue;
      for (const auto& w : neighbours(v))
        if (!depth.count(w)) {
          depth[w] = depth[v] + 1;
          q.push(w);
        }
    }
    long expected = 1;
    for (long d = 1, c = p + 1; d <= 4; ++d, c *= p) expected += c;
    CHECK(static_cast<long>(depth.size()) == expected);
    for (const auto& [v, d] : depth) {
      CHECK(v.distance() == d);
      auto path = geodesic(base_vertex(p), v);
      CHECK(static_cast<long>(path.size()) == d + 1);
    }
  }
}

TEST_CASE("geodesics and covering edges") {
  std::mt19937_64 rng(99);
  for (unsigned p : {2u, 3u}) {
    NormalizedVertex v0 = base_vertex(p);
    CHECK(geodesic(v0, v0).size() == 1);
    auto g01 = geodesic(v0, normalize_vertex(p, g0_matrix(p)));
    CHECK(g01.size() == 2);
    CHECK(edges_leaving_geodesic(v0, v0).size() == p + 1);
    for (int t = 0; t < 40; ++t) {
      auto v = normalize_vertex(p, random_matrix(rng, 50));
      auto w = normalize_vertex(p, random_matrix(rng, 50));
      auto path = geodesic(v, w);
      auto back = geodesic(w, v);
      CHECK(path.size() == back.size());
      CHECK(path.front() == v);
      CHECK(path.back() == w);
      std::set<NormalizedVertex> distinct(path.begin(), path.end());
      CHECK(distinct.size() == path.size());
      for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        auto nb = neighbours(path[i]);
        CHECK(std::find(nb.begin(), nb.end(), path[i + 1]) != nb.end());
      }
      long n = static_cast<long>(path.size()) - 1;
      auto cover = edges_leaving_geodesic(v, w);
      long expected = n == 0 ? p + 1 : 2 * p + (n - 1) * (p - 1);
      CHECK(static_cast<long>(cover.size()) == expected);
      // the balls partition P^1(Q_p)
      std::vector<Ball> balls;
      for (const auto& e : cover) balls.push_back(ball_of_edge(e));
      for (int s = 0; s < 200; ++s) {
        auto x = random_point(p, rng);
        int hits = 0;
        for (const auto& b : balls) hits += b.contains(x);
        CHECK(hits == 1);
      }
    }
  }
}

TEST_CASE("balls of edges") {
  std::mt19937_64 rng(5);
  for (unsigned p : {2u, 3u, 5u}) {
    Ball b0 = ball_of_edge(base_edge(p));
    CHECK_FALSE(b0.complement);
    CHECK(b0.radius == 0);
    CHECK(b0.center == 0);
    Ball b1 = ball_of_edge(opposite(base_edge(p)));
    CHECK(b1.complement);
    CHECK(b1.radius == 0);
    for (unsigned j = 0; j < p; ++j) {
      Ball bj = ball_of_edge(normalize_edge(p, alpha_matrix(p, j)));
      CHECK_FALSE(bj.complement);
      CHECK(bj.radius == 1);
      CHECK(bj.center == j);
    }
    // star partition at random vertices
    for (int t = 0; t < 20; ++t) {
      auto v = normalize_vertex(p, random_matrix(rng, 80));
      std::vector<Ball> balls;
      for (const auto& e : star(v)) balls.push_back(ball_of_edge(e));
      for (int s = 0; s < 100; ++s) {
        auto x = random_point(p, rng);
        int hits = 0;
        for (const auto& b : balls) hits += b.contains(x);
        CHECK(hits == 1);
      }
    }
    // equivariance, checked pointwise through the Mobius map
    for (int t = 0; t < 20; ++t) {
      IMat2 h = random_matrix(rng, 20);
      auto e = normalize_edge(p, random_matrix(rng, 40));
      Ball b = ball_of_edge(e);
      Ball hb = ball_of_edge(normalize_edge(p, h * e.m));
      CHECK(transform_ball(PMat2::from_integer(p, h, 40), b) == hb);
      for (int s = 0; s < 100; ++s) {
        auto x = random_point(p, rng);
        std::optional<mpq_class> hx;
        mpq_class num = x ? mpq_class(h.a()) * *x + mpq_class(h.b()) : mpq_class(h.a());
        mpq_class den = x ? mpq_class(h.c()) * *x + mpq_class(h.d()) : mpq_class(h.c());
        if (den != 0) hx = num / den;
        CHECK(b.contains(x) == hb.contains(hx));
      }
    }
  }
}
