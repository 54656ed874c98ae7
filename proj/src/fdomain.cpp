#include "lop/fdomain.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "json.hpp"

namespace lop {

namespace {

constexpr int kAttempts = 8;

template <class F>
auto with_precision_retry(long start, F&& f) {
  long prec = start;
  for (int attempt = 0;; ++attempt) {
    try {
      return f(prec);
    } catch (const PrecisionError&) {
      if (attempt + 1 >= kAttempts) throw;
    } catch (const DomainError&) {
      if (attempt + 1 >= kAttempts) throw;
    }
    prec *= 2;
  }
}

IMat2 reduce_mod(const IMat2& m, const mpz_class& q) {
  IMat2 out = m;
  for (auto& x : out.e) mpz_mod(x.get_mpz_t(), x.get_mpz_t(), q.get_mpz_t());
  return out;
}

}  // namespace

ArithmeticGroup::ArithmeticGroup(const QuaternionOrder& order, unsigned p, int splitting_variant)
    : order_(order), p_(p), splitting_(order, p, splitting_variant) {}

QuatElem ArithmeticGroup::identity() const { return normalize(order_.one()); }

QuatElem ArithmeticGroup::normalize(QuatElem x) const {
  mpz_class g = 0;
  for (const auto& c : x) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  if (g == 0) throw DomainError("zero quaternion");
  for (auto& c : x) c /= g;
  for (const auto& c : x)
    if (c != 0) {
      if (c < 0)
        for (auto& z : x) z = -z;
      break;
    }
  return x;
}

QuatElem ArithmeticGroup::multiply(const QuatElem& x, const QuatElem& y) const {
  return normalize(order_.multiply(x, y));
}

QuatElem ArithmeticGroup::inverse(const QuatElem& x) const { return normalize(order_.conjugate(x)); }

long ArithmeticGroup::denominator_exponent(const QuatElem& x) const {
  return valuation_of(p_, order_.norm(x)) / 2;
}

bool ArithmeticGroup::in_gamma(const QuatElem& x) const {
  mpz_class n = order_.norm(x);
  if (n <= 0) return false;
  long v = valuation_of(p_, n);
  return v % 2 == 0 && n == prime_power(p_, v);
}

PMat2 ArithmeticGroup::matrix(const QuatElem& x, long precision) const { return splitting_.image(x, precision); }

NormalizedVertex ArithmeticGroup::act(const QuatElem& x, const NormalizedVertex& v) const {
  long start = 2 * (valuation_of(p_, order_.norm(x)) + v.distance()) + 8;
  return with_precision_retry(start, [&](long prec) {
    return normalize_vertex(matrix(x, prec) * PMat2::from_integer(p_, v.m, prec));
  });
}

NormalizedEdge ArithmeticGroup::act(const QuatElem& x, const NormalizedEdge& e) const {
  long start = 2 * (valuation_of(p_, order_.norm(x)) + valuation_of(p_, e.m.det())) + 8;
  return with_precision_retry(start, [&](long prec) {
    return normalize_edge(matrix(x, prec) * PMat2::from_integer(p_, e.m, prec)).edge;
  });
}

std::vector<QuatElem> ArithmeticGroup::coset_solutions(const IMat2& g1, const IMat2& g2, bool edge,
                                                       bool all) const {
  ++searches_;
  const long D = valuation_of(p_, g1.det()) + valuation_of(p_, g2.det());
  if (D % 2 != 0) return {};
  const long prec = D + 1;
  const mpz_class& q = prime_power(p_, prec);
  auto images = splitting_.basis_images(prec);
  // entry (r, c) of adj(g2) iota(b_i) g1
  std::array<IMat2, 4> entries;
  for (int i = 0; i < 4; ++i) entries[i] = reduce_mod(g2.adjugate() * images[i] * g1, q);
  std::vector<Congruence> conditions;
  for (int rc = 0; rc < 4; ++rc) {
    Congruence cond;
    cond.modulus = (edge && rc == 2) ? prime_power(p_, D + 1) : prime_power(p_, D);
    for (int i = 0; i < 4; ++i) cond.coefficients.push_back(entries[i].e[rc]);
    conditions.push_back(cond);
  }
  auto solutions = enumerate_norm(order_, prime_power(p_, D), conditions);
  std::set<QuatElem> out;
  for (auto& x : solutions) {
    out.insert(normalize(x));
    if (!all) break;
  }
  return {out.begin(), out.end()};
}

std::optional<QuatElem> ArithmeticGroup::vertex_equivalence(const NormalizedVertex& v1,
                                                            const NormalizedVertex& v2) const {
  auto sols = coset_solutions(v1.m, v2.m, false, false);
  if (sols.empty()) return std::nullopt;
  return sols.front();
}

std::optional<QuatElem> ArithmeticGroup::edge_equivalence(const NormalizedEdge& e1, const NormalizedEdge& e2) const {
  auto sols = coset_solutions(e1.m, e2.m, true, false);
  if (sols.empty()) return std::nullopt;
  return sols.front();
}

std::vector<QuatElem> ArithmeticGroup::vertex_stabilizer(const NormalizedVertex& v) const {
  return coset_solutions(v.m, v.m, false, true);
}

FundamentalDomain FundamentalDomain::compute(const ArithmeticGroup& group, long edge_budget) {
  FundamentalDomain fd;
  fd.group_ = group;
  const long searches_before = group.search_count();
  const unsigned p = group.prime();
  auto& V = fd.vertices_;
  auto& E = fd.edges_;
  std::set<QuatElem> generators;

  auto add_vertex = [&](const NormalizedVertex& v) {
    VertexRecord rec;
    rec.vertex = v;
    rec.stabilizer = group.vertex_stabilizer(v);
    rec.neighbours = neighbours(v);
    rec.star_edges = star(v);
    for (const auto& s : rec.stabilizer)
      if (s != group.identity()) generators.insert(s);
    V.push_back(std::move(rec));
    return static_cast<int>(V.size()) - 1;
  };
  auto add_edge = [&](const NormalizedEdge& e, int src) {
    if (static_cast<long>(E.size()) >= edge_budget) throw BudgetExceeded("fundamental domain edge budget exhausted");
    EdgeRecord rec;
    rec.edge = e;
    rec.source = src;
    for (const auto& s : V[src].stabilizer)
      if (group.act(s, e) == e) rec.stabilizer.push_back(s);
    E.push_back(std::move(rec));
    return static_cast<int>(E.size()) - 1;
  };

  add_vertex(base_vertex(p));
  for (std::size_t vi = 0; vi < V.size(); ++vi) {
    const int v = static_cast<int>(vi);
    const std::size_t positions = V[vi].star_edges.size();
    for (std::size_t l = 0; l < positions; ++l) {
      const NormalizedEdge f = V[vi].star_edges[l];
      std::optional<std::pair<int, QuatElem>> hit;
      for (std::size_t j = 0; j < E.size() && !hit; ++j) {
        if (E[j].source != v) continue;
        for (const auto& s : V[vi].stabilizer)
          if (group.act(s, E[j].edge) == f) {
            hit = std::make_pair(static_cast<int>(j), s);
            break;
          }
      }
      if (hit) {
        V[vi].star.push_back(*hit);
        continue;
      }
      const int j = add_edge(f, v);
      V[vi].star.emplace_back(j, group.identity());
      const NormalizedVertex w = target(f);
      const NormalizedEdge fbar = opposite(f);
      std::optional<std::pair<int, QuatElem>> equivalent;
      for (std::size_t u = 0; u < V.size() && !equivalent; ++u) {
        if ((V[u].vertex.distance() - w.distance()) % 2 != 0) continue;
        if (auto d = group.vertex_equivalence(V[u].vertex, w)) equivalent = std::make_pair(static_cast<int>(u), *d);
      }
      int jbar;
      if (equivalent) {
        const auto& [u, delta] = *equivalent;
        const QuatElem dinv = group.inverse(delta);
        jbar = add_edge(group.act(dinv, fbar), u);
        E[j].target = u;
        E[j].target_move = delta;
        E[jbar].target = v;
        E[jbar].target_move = dinv;
        E[j].opposite_move = delta;
        E[jbar].opposite_move = dinv;
        if (delta != group.identity()) generators.insert(delta);
      } else {
        const int u = add_vertex(w);
        jbar = add_edge(fbar, u);
        E[j].target = u;
        E[j].target_move = group.identity();
        E[jbar].target = v;
        E[jbar].target_move = group.identity();
        E[j].opposite_move = group.identity();
        E[jbar].opposite_move = group.identity();
      }
      E[j].opposite = jbar;
      E[jbar].opposite = j;
      E[j].positive = true;
      E[jbar].positive = false;
    }
  }
  fd.generators_.assign(generators.begin(), generators.end());
  fd.construction_searches_ = group.search_count() - searches_before;
  return fd;
}

std::vector<int> FundamentalDomain::positive_edges() const {
  std::vector<int> out;
  for (std::size_t j = 0; j < edges_.size(); ++j)
    if (edges_[j].positive) out.push_back(static_cast<int>(j));
  return out;
}

std::pair<QuatElem, int> FundamentalDomain::locate_vertex(const NormalizedVertex& w) const {
  const auto path = geodesic(base_vertex(prime()), w);
  QuatElem gamma = group_.identity();
  int u = 0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const NormalizedVertex local = group_.act(group_.inverse(gamma), path[i]);
    const auto& nb = vertices_[u].neighbours;
    auto it = std::find(nb.begin(), nb.end(), local);
    if (it == nb.end()) throw std::logic_error("locate_vertex: walk left the star");
    const auto& [j, eta] = vertices_[u].star[it - nb.begin()];
    gamma = group_.multiply(group_.multiply(gamma, eta), edges_[j].target_move);
    u = edges_[j].target;
  }
  return {gamma, u};
}

std::pair<QuatElem, int> FundamentalDomain::locate_edge(const NormalizedEdge& e) const {
  auto [gamma, u] = locate_vertex(source(e));
  const NormalizedEdge local = group_.act(group_.inverse(gamma), e);
  const auto& st = vertices_[u].star_edges;
  auto it = std::find(st.begin(), st.end(), local);
  if (it == st.end()) throw std::logic_error("locate_edge: edge not in star of its source");
  const auto& [j, eta] = vertices_[u].star[it - st.begin()];
  return {group_.multiply(gamma, eta), j};
}

EdgeReduction FundamentalDomain::reduce_edge(const PMat2& g, long precision) const {
  auto [gamma, j] = locate_edge(normalize_edge(g).edge);
  const long r = group_.denominator_exponent(gamma);
  EdgeNormalization n = normalize_edge(group_.matrix(group_.inverse(gamma), g.precision() + 2 * r + 8) * g);
  if (!(n.edge == edges_[j].edge)) throw std::logic_error("reduce_edge: inconsistent representative");
  PMat2 sigma = n.sigma.inverse();
  if (sigma.precision() < precision) throw PrecisionError("reduce_edge: input matrix lacks precision");
  EdgeReduction red;
  red.gamma = gamma;
  red.index = j;
  red.u_exponent = -n.u_exponent - r;
  red.sigma = sigma.with_precision(precision);
  return red;
}

EdgeReduction FundamentalDomain::reduce_edge(const IMat2& g, long precision) const {
  const unsigned p = prime();
  return with_precision_retry(precision + 2 * exact_precision(p, g), [&](long prec) {
    return reduce_edge(PMat2::from_integer(p, g, prec), precision);
  });
}

namespace {

using nlohmann::json;

json mat_json(const IMat2& m) {
  json a = json::array();
  for (const auto& x : m.e) a.push_back(x.get_str());
  return a;
}

IMat2 mat_from(const json& a) {
  IMat2 m;
  for (int i = 0; i < 4; ++i) m.e[i] = mpz_class(a.at(i).get<std::string>());
  return m;
}

json elem_json(const QuatElem& x) {
  json a = json::array();
  for (const auto& c : x) a.push_back(c.get_str());
  return a;
}

QuatElem elem_from(const json& a) {
  QuatElem x;
  for (const auto& c : a) x.emplace_back(c.get<std::string>());
  return x;
}

json elems_json(const std::vector<QuatElem>& xs) {
  json a = json::array();
  for (const auto& x : xs) a.push_back(elem_json(x));
  return a;
}

std::vector<QuatElem> elems_from(const json& a) {
  std::vector<QuatElem> out;
  for (const auto& x : a) out.push_back(elem_from(x));
  return out;
}

json order_json(const QuaternionOrder& o) {
  json a = json::array();
  for (const auto& b : o.basis()) {
    json q = json::array();
    for (const auto& c : b) q.push_back(c.get_str());
    a.push_back(q);
  }
  return a;
}

}  // namespace

std::string FundamentalDomain::to_json() const {
  json j;
  j["canonical_form_version"] = kCanonicalFormVersion;
  j["p"] = prime();
  j["splitting_variant"] = group_.splitting().variant();
  j["order_basis"] = order_json(group_.order());
  json vs = json::array();
  for (const auto& v : vertices_) {
    json star_entries = json::array();
    for (const auto& [idx, eta] : v.star) star_entries.push_back({{"edge", idx}, {"move", elem_json(eta)}});
    vs.push_back({{"matrix", mat_json(v.vertex.m)}, {"stabilizer", elems_json(v.stabilizer)}, {"star", star_entries}});
  }
  j["vertices"] = vs;
  json es = json::array();
  for (const auto& e : edges_) {
    es.push_back({{"matrix", mat_json(e.edge.m)},
                  {"source", e.source},
                  {"target", e.target},
                  {"target_move", elem_json(e.target_move)},
                  {"opposite", e.opposite},
                  {"opposite_move", elem_json(e.opposite_move)},
                  {"positive", e.positive},
                  {"stabilizer", elems_json(e.stabilizer)}});
  }
  j["edges"] = es;
  j["generators"] = elems_json(generators_);
  return j.dump();
}

FundamentalDomain FundamentalDomain::from_json(const std::string& text, const ArithmeticGroup& group) {
  const json j = json::parse(text);
  if (j.at("canonical_form_version").get<int>() != kCanonicalFormVersion)
    throw DomainError("cached domain uses a different canonical form version");
  if (j.at("p").get<unsigned>() != group.prime() ||
      j.at("splitting_variant").get<int>() != group.splitting().variant() ||
      j.at("order_basis") != order_json(group.order()))
    throw DomainError("cached domain belongs to a different group");
  FundamentalDomain fd;
  fd.group_ = group;
  const long searches_before = group.search_count();
  const unsigned p = group.prime();
  for (const auto& v : j.at("vertices")) {
    VertexRecord rec;
    rec.vertex = NormalizedVertex{mat_from(v.at("matrix")), p};
    rec.stabilizer = elems_from(v.at("stabilizer"));
    rec.neighbours = neighbours(rec.vertex);
    rec.star_edges = star(rec.vertex);
    for (const auto& s : v.at("star")) rec.star.emplace_back(s.at("edge").get<int>(), elem_from(s.at("move")));
    fd.vertices_.push_back(std::move(rec));
  }
  for (const auto& e : j.at("edges")) {
    EdgeRecord rec;
    rec.edge = NormalizedEdge{mat_from(e.at("matrix")), p};
    rec.source = e.at("source").get<int>();
    rec.target = e.at("target").get<int>();
    rec.target_move = elem_from(e.at("target_move"));
    rec.opposite = e.at("opposite").get<int>();
    rec.opposite_move = elem_from(e.at("opposite_move"));
    rec.positive = e.at("positive").get<bool>();
    rec.stabilizer = elems_from(e.at("stabilizer"));
    fd.edges_.push_back(std::move(rec));
  }
  fd.generators_ = elems_from(j.at("generators"));
  fd.construction_searches_ = group.search_count() - searches_before;
  return fd;
}

}  // namespace lop
