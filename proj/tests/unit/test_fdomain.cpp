#include <doctest.h>

#include <random>

#include "lop/fdomain.hpp"

using namespace lop;

namespace {

ArithmeticGroup make_group(unsigned p, long nminus, long nplus, int variant = 0) {
  auto B = build_algebra(nminus, p);
  auto O = QuaternionOrder::maximal(B);
  if (nplus > 1) O = O.eichler(nplus);
  return ArithmeticGroup(O, p, variant);
}

// Eichler mass (1/12) prod_{l | D}(l - 1) prod_{l | level}(l + 1), squarefree data
mpq_class eichler_mass(long disc, long level) {
  mpq_class m(1, 12);
  for (auto [l, e] : factorize(disc)) m *= (l - 1);
  for (auto [l, e] : factorize(level)) m *= (l + 1);
  return m;
}

NormalizedVertex random_vertex(std::mt19937_64& rng, unsigned p, int steps) {
  NormalizedVertex v = base_vertex(p);
  NormalizedVertex prev = v;
  for (int i = 0; i < steps; ++i) {
    auto nb = neighbours(v);
    NormalizedVertex w;
    do w = nb[rng() % nb.size()];
    while (w == prev && i > 0);
    prev = v;
    v = w;
  }
  return v;
}

struct Case {
  unsigned p;
  long nminus, nplus;
};

}  // namespace

TEST_CASE("domain masses match the Eichler mass formula") {
  for (Case c : {Case{3, 2, 1}, Case{2, 3, 1}, Case{2, 5, 1}, Case{2, 7, 1}, Case{5, 2, 1}, Case{3, 2, 5},
                 Case{7, 2, 1}, Case{2, 3, 5}}) {
    CAPTURE(c.p);
    CAPTURE(c.nminus);
    CAPTURE(c.nplus);
    auto G = make_group(c.p, c.nminus, c.nplus);
    auto fd = FundamentalDomain::compute(G);
    mpq_class edge_mass = 0, vertex_mass = 0;
    for (int j : fd.positive_edges()) edge_mass += mpq_class(1, fd.edges()[j].stabilizer.size());
    for (const auto& v : fd.vertices()) vertex_mass += mpq_class(1, v.stabilizer.size());
    CHECK(edge_mass == eichler_mass(c.nminus, c.p * c.nplus));
    CHECK(vertex_mass == 2 * eichler_mass(c.nminus, c.nplus));
    for (const auto& v : fd.vertices()) CHECK(12 % v.stabilizer.size() == 0);
    CHECK(fd.positive_edges().size() * 2 == fd.edges().size());
  }
}

TEST_CASE("domain records are consistent") {
  for (Case c : {Case{3, 2, 1}, Case{2, 7, 1}, Case{3, 2, 5}}) {
    auto G = make_group(c.p, c.nminus, c.nplus);
    auto fd = FundamentalDomain::compute(G);
    const auto& E = fd.edges();
    const auto& V = fd.vertices();
    for (std::size_t j = 0; j < E.size(); ++j) {
      CHECK(source(E[j].edge) == V[E[j].source].vertex);
      CHECK(target(E[j].edge) == G.act(E[j].target_move, V[E[j].target].vertex));
      CHECK(opposite(E[j].edge) == G.act(E[j].opposite_move, E[E[j].opposite].edge));
      CHECK(E[E[j].opposite].opposite == static_cast<int>(j));
      CHECK(E[j].positive != E[E[j].opposite].positive);
      for (const auto& s : E[j].stabilizer) CHECK(G.act(s, E[j].edge) == E[j].edge);
    }
    for (const auto& v : V) {
      for (const auto& s : v.stabilizer) {
        CHECK(G.in_gamma(s));
        CHECK(G.act(s, v.vertex) == v.vertex);
      }
      for (std::size_t l = 0; l < v.star.size(); ++l)
        CHECK(v.star_edges[l] == G.act(v.star[l].second, E[v.star[l].first].edge));
    }
    for (const auto& g : fd.generators()) CHECK(G.in_gamma(g));
    // distinct representatives are inequivalent
    for (std::size_t i = 0; i < E.size(); ++i)
      for (std::size_t j = i + 1; j < E.size(); ++j) CHECK_FALSE(G.edge_equivalence(E[i].edge, E[j].edge));
    for (std::size_t i = 0; i < V.size(); ++i)
      for (std::size_t j = i + 1; j < V.size(); ++j) CHECK_FALSE(G.vertex_equivalence(V[i].vertex, V[j].vertex));
  }
}

TEST_CASE("locating and reducing random edges") {
  std::mt19937_64 rng(11);
  for (Case c : {Case{3, 2, 1}, Case{2, 3, 1}, Case{2, 5, 3}}) {
    auto G = make_group(c.p, c.nminus, c.nplus);
    auto fd = FundamentalDomain::compute(G);
    for (int trial = 0; trial < 25; ++trial) {
      auto v = random_vertex(rng, c.p, 1 + trial % 7);
      auto [gv, u] = fd.locate_vertex(v);
      CHECK(G.in_gamma(gv));
      CHECK(G.act(gv, fd.vertices()[u].vertex) == v);
      auto st = star(v);
      auto e = st[rng() % st.size()];
      auto [ge, j] = fd.locate_edge(e);
      CHECK(G.act(ge, fd.edges()[j].edge) == e);
      // any Gamma-translate of a representative locates back to it
      auto again = fd.locate_edge(G.act(G.multiply(ge, gv), fd.edges()[j].edge));
      CHECK(again.second == j);

      IMat2 g(static_cast<long>(rng() % 50) + 1, static_cast<long>(rng() % 50), static_cast<long>(rng() % 50),
              static_cast<long>(rng() % 50) + 1);
      if (g.det() == 0) continue;
      const long W = 12;
      auto red = fd.reduce_edge(g, W);
      CHECK(red.sigma.c.valuation() >= 1);
      CHECK(red.sigma.det().valuation() == 0);
      // p^u iota(x) b_j sigma equals +-p^r g (elements are defined up to sign)
      const long r = G.denominator_exponent(red.gamma);
      const long prec = W + 4 * r + 20;
      PMat2 lhs = (G.matrix(red.gamma, prec) * PMat2::from_integer(c.p, fd.edges()[red.index].edge.m, prec)) *
                  red.sigma;
      lhs = lhs.shifted(red.u_exponent);
      PMat2 rhs = PMat2::from_integer(c.p, g, prec).shifted(r);
      const long m = W - 2 * r - 4;
      CHECK((lhs.equals_mod(rhs, m) || lhs.scaled(PadicNumber::from_integer(c.p, -1, prec)).equals_mod(rhs, m)));
    }
  }
}

TEST_CASE("domain serialization round trip") {
  auto G = make_group(3, 2, 1);
  auto fd = FundamentalDomain::compute(G);
  auto back = FundamentalDomain::from_json(fd.to_json(), G);
  CHECK(back.to_json() == fd.to_json());
  CHECK_THROWS_AS(FundamentalDomain::from_json(fd.to_json(), make_group(3, 2, 1, 1)), DomainError);
}
