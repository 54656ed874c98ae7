#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lop/bttree.hpp"
#include "lop/quatalg.hpp"

namespace lop {

// Elements of B^x / Q^x are stored as primitive order vectors with a positive leading coordinate.
// For Gamma = R[1/p]^x_1 the element x stands for x / p^r with nrd(x) = p^(2r).
using QuatElem = IntVector;

class ArithmeticGroup {
 public:
  ArithmeticGroup() = default;
  ArithmeticGroup(const QuaternionOrder& order, unsigned p, int splitting_variant = 0);

  unsigned prime() const { return p_; }
  const QuaternionOrder& order() const { return order_; }
  const Splitting& splitting() const { return splitting_; }

  QuatElem identity() const;
  QuatElem normalize(QuatElem x) const;
  QuatElem multiply(const QuatElem& x, const QuatElem& y) const;
  QuatElem inverse(const QuatElem& x) const;
  // v_p(nrd(x)) / 2 for elements of Gamma
  long denominator_exponent(const QuatElem& x) const;
  bool in_gamma(const QuatElem& x) const;

  // iota(x) (unscaled) at the given absolute precision
  PMat2 matrix(const QuatElem& x, long precision) const;
  NormalizedVertex act(const QuatElem& x, const NormalizedVertex& v) const;
  NormalizedEdge act(const QuatElem& x, const NormalizedEdge& e) const;

  // gamma in Gamma with gamma.v1 = v2
  std::optional<QuatElem> vertex_equivalence(const NormalizedVertex& v1, const NormalizedVertex& v2) const;
  std::optional<QuatElem> edge_equivalence(const NormalizedEdge& e1, const NormalizedEdge& e2) const;
  // Stab_Gamma(v) up to sign
  std::vector<QuatElem> vertex_stabilizer(const NormalizedVertex& v) const;

  // Number of lattice searches run so far.
  long search_count() const { return searches_; }

 private:
  std::vector<QuatElem> coset_solutions(const IMat2& g1, const IMat2& g2, bool edge, bool all) const;
  QuaternionOrder order_;
  unsigned p_ = 0;
  Splitting splitting_;
  mutable long searches_ = 0;
};

struct VertexRecord {
  NormalizedVertex vertex;
  std::vector<QuatElem> stabilizer;
  std::vector<NormalizedVertex> neighbours;
  std::vector<NormalizedEdge> star_edges;
  // star position l: (j, eta) with star edge l = eta . b_j
  std::vector<std::pair<int, QuatElem>> star;
};

struct EdgeRecord {
  NormalizedEdge edge;
  int source = 0;            // vertex record index of s(b_j)
  int target = 0;            // vertex record u with t(b_j) = target_move . rep(u)
  QuatElem target_move;
  int opposite = 0;          // opposite(b_j) = opposite_move . b_opposite
  QuatElem opposite_move;
  bool positive = true;      // one orientation per unoriented orbit
  std::vector<QuatElem> stabilizer;  // Stab_Gamma(b_j e0) up to sign
};

struct EdgeReduction {
  QuatElem gamma;
  int index = 0;
  long u_exponent = 0;  // g = p^u_exponent . gamma . b_j . sigma
  PMat2 sigma;
};

class FundamentalDomain {
 public:
  FundamentalDomain() = default;
  static FundamentalDomain compute(const ArithmeticGroup& group, long edge_budget = 100000);
  // Lattice searches spent building this domain (0 when loaded from JSON).
  long construction_searches() const { return construction_searches_; }

  const ArithmeticGroup& group() const { return group_; }
  unsigned prime() const { return group_.prime(); }
  const std::vector<VertexRecord>& vertices() const { return vertices_; }
  const std::vector<EdgeRecord>& edges() const { return edges_; }
  std::vector<int> positive_edges() const;
  const std::vector<QuatElem>& generators() const { return generators_; }

  // (gamma, u) with v = gamma . rep(u)
  std::pair<QuatElem, int> locate_vertex(const NormalizedVertex& v) const;
  // (gamma, j) with e = gamma . b_j
  std::pair<QuatElem, int> locate_edge(const NormalizedEdge& e) const;
  // g = p^u . gamma . b_j . sigma with sigma in Gamma_0(pZ_p) known to the given precision
  EdgeReduction reduce_edge(const PMat2& g, long precision) const;
  EdgeReduction reduce_edge(const IMat2& g, long precision) const;

  std::string to_json() const;
  static FundamentalDomain from_json(const std::string& text, const ArithmeticGroup& group);

 private:
  ArithmeticGroup group_;
  std::vector<VertexRecord> vertices_;
  std::vector<EdgeRecord> edges_;
  std::vector<QuatElem> generators_;
  long construction_searches_ = 0;
};

// Version of the canonical matrix forms used in caches.
constexpr int kCanonicalFormVersion = 1;

}  // namespace lop
