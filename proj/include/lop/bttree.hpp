#pragma once

#include <optional>
#include <vector>

#include "lop/matrix2.hpp"

namespace lop {

// Vertex g.v0 in canonical form [[p^a, b], [0, p^c]], 0 <= b < p^a, min(a, c, v(b)) = 0.
struct NormalizedVertex {
  IMat2 m;
  unsigned p = 0;
  long distance() const;  // d(v0, this) = v_p(det)
  bool operator==(const NormalizedVertex& o) const { return m == o.m; }
  bool operator<(const NormalizedVertex& o) const { return m < o.m; }
};

// Edge g.e0 (e0 = v1 -> v0) in canonical form t * m_j where t is the canonical
// form of the target vertex and m_j = [[j, 1], [1, 0]] (0 <= j < p) or identity.
struct NormalizedEdge {
  IMat2 m;
  unsigned p = 0;
  bool operator==(const NormalizedEdge& o) const { return m == o.m; }
  bool operator<(const NormalizedEdge& o) const { return m < o.m; }
};

struct EdgeNormalization {
  NormalizedEdge edge;
  long u_exponent = 0;  // u = p^u_exponent
  PMat2 sigma;          // g * u * sigma = edge.m, sigma in Gamma_0(pZ_p)
};

struct VertexNormalization {
  NormalizedVertex vertex;
  long u_exponent = 0;
  PMat2 k;  // g * u * k = vertex.m, k in GL_2(Z_p)
};

// Ball c + p^n Z_p, or its complement in P^1(Q_p).
struct Ball {
  unsigned p = 0;
  bool complement = false;
  mpq_class center;  // canonical representative in [0, p^radius)
  long radius = 0;
  // x == nullopt means the point at infinity.
  bool contains(const std::optional<mpq_class>& x) const;
  bool operator==(const Ball& o) const {
    return complement == o.complement && center == o.center && radius == o.radius;
  }
};

IMat2 alpha_matrix(unsigned p, long l);  // [[p, l], [0, 1]]
IMat2 g0_matrix(unsigned p);             // [[0, 1], [p, 0]]

// Precision used when an exact integer matrix is converted for normalization.
long exact_precision(unsigned p, const IMat2& g);

NormalizedVertex normalize_vertex(const PMat2& g);
NormalizedVertex normalize_vertex(unsigned p, const IMat2& g);
VertexNormalization normalize_vertex_with_witness(const PMat2& g);
EdgeNormalization normalize_edge(const PMat2& g);
NormalizedEdge normalize_edge(unsigned p, const IMat2& g);

NormalizedVertex base_vertex(unsigned p);
NormalizedEdge base_edge(unsigned p);
NormalizedVertex source(const NormalizedEdge& e);
NormalizedVertex target(const NormalizedEdge& e);
NormalizedEdge opposite(const NormalizedEdge& e);

// The p+1 edges with source v, in the order g*alpha_0, ..., g*alpha_{p-1}, g*g0.
std::vector<NormalizedEdge> star(const NormalizedVertex& v);
// The p+1 neighbours of v in the same order (targets of the star edges).
std::vector<NormalizedVertex> neighbours(const NormalizedVertex& v);

std::vector<NormalizedVertex> geodesic(const NormalizedVertex& v, const NormalizedVertex& w);
// Edge between adjacent vertices v -> w.
NormalizedEdge edge_between(const NormalizedVertex& v, const NormalizedVertex& w);
// All edges with source on the geodesic v..w and target off it.
std::vector<NormalizedEdge> edges_leaving_geodesic(const NormalizedVertex& v, const NormalizedVertex& w);

Ball ball_of_edge(const NormalizedEdge& e);
// Image of a ball under the fractional linear map of g.
Ball transform_ball(const PMat2& g, const Ball& b);
// Edge whose ball is b.
PMat2 edge_matrix_of_ball(const Ball& b, long precision);

}  // namespace lop
