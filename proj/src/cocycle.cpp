#include "lop/cocycle.hpp"

#include <algorithm>
#include <climits>

namespace lop {

namespace {

using Poly = std::vector<PadicNumber>;

Poly poly_mul(const Poly& f, const Poly& g) {
  Poly out(f.size() + g.size() - 1, PadicNumber::zero(f[0].prime(), LONG_MAX / 8));
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) out[i + j] += f[i] * g[j];
  return out;
}

PadicMatrix action_with_scale(const PMat2& g, long k, const PadicNumber& scale) {
  const unsigned p = g.prime();
  const std::size_t n = static_cast<std::size_t>(k) + 1;
  // powers of (ax + b) and (cx + d)
  std::vector<Poly> up(n), down(n);
  up[0] = {PadicNumber::from_integer(p, 1, g.precision() + scale.precision() + 64)};
  down[0] = up[0];
  for (std::size_t i = 1; i < n; ++i) {
    up[i] = poly_mul(up[i - 1], {g.b, g.a});
    down[i] = poly_mul(down[i - 1], {g.d, g.c});
  }
  PadicMatrix R(p, n, n, LONG_MAX / 8);
  for (std::size_t i = 0; i < n; ++i) {
    Poly f = poly_mul(up[i], down[n - 1 - i]);
    for (std::size_t m = 0; m < n; ++m) R(i, m) = f[m] * scale;
  }
  return R;
}

mpz_class binomial(long n, long r) {
  mpz_class out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(r));
  return out;
}

}  // namespace

PadicMatrix polynomial_action(const PMat2& g, long k) {
  PadicNumber det = g.det();
  if (det.is_zero()) throw DomainError("polynomial_action: singular matrix");
  return action_with_scale(g, k, det.pow(k / 2).inverse());
}

VkElement vk_act(const PMat2& g, const VkElement& w) {
  const long k = static_cast<long>(w.size()) - 1;
  return polynomial_action(g, k).apply(w);
}

VkElement vk_add(const VkElement& a, const VkElement& b) {
  VkElement out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

VkElement vk_sub(const VkElement& a, const VkElement& b) {
  VkElement out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

VkElement vk_neg(const VkElement& a) {
  VkElement out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = -a[i];
  return out;
}

VkElement vk_zero(unsigned p, long k, long precision) {
  return VkElement(static_cast<std::size_t>(k) + 1, PadicNumber::zero(p, precision));
}

long vk_valuation(const VkElement& a) {
  long v = LONG_MAX;
  for (const auto& x : a) v = std::min(v, x.valuation());
  return v;
}

CocycleSpace::CocycleSpace(std::shared_ptr<const FundamentalDomain> domain, long k, long precision)
    : domain_(std::move(domain)), k_(k), precision_(precision) {
  if (k < 0 || k % 2 != 0) throw DomainError("weight index k must be even and nonnegative");
}

const PadicMatrix& CocycleSpace::rho(const QuatElem& x) const {
  auto it = rho_cache_.find(x);
  if (it != rho_cache_.end()) return it->second;
  const unsigned p = prime();
  const mpz_class n = group().order().norm(x);
  const long v = valuation_of(p, n);
  const long prec = precision_ + (k_ / 2) * v + 4;
  PMat2 m = group().matrix(x, prec);
  PadicNumber det = PadicNumber::from_integer(p, n, prec + k_ * v + 64);
  PadicMatrix R = action_with_scale(m, k_, det.pow(k_ / 2).inverse());
  return rho_cache_.emplace(x, std::move(R)).first->second;
}

VkElement CocycleSpace::act(const QuatElem& x, const VkElement& w) const { return rho(x).apply(w); }

HarmonicCocycle CocycleSpace::from_positive(const std::vector<VkElement>& positive_values) const {
  const auto& E = domain_->edges();
  const auto pos = domain_->positive_edges();
  std::vector<int> slot(E.size(), -1);
  for (std::size_t a = 0; a < pos.size(); ++a) slot[pos[a]] = static_cast<int>(a);
  HarmonicCocycle c;
  c.k = k_;
  c.values.resize(E.size());
  for (std::size_t j = 0; j < E.size(); ++j) {
    if (E[j].positive)
      c.values[j] = positive_values[slot[j]];
    else
      c.values[j] = vk_neg(act(E[j].opposite_move, positive_values[slot[E[j].opposite]]));
  }
  return c;
}

const std::vector<HarmonicCocycle>& CocycleSpace::basis() const {
  if (basis_ready_) return basis_;
  const unsigned p = prime();
  const std::size_t n = static_cast<std::size_t>(k_) + 1;
  const auto& E = domain_->edges();
  const auto pos = domain_->positive_edges();
  std::vector<int> slot(E.size(), -1);
  for (std::size_t a = 0; a < pos.size(); ++a) slot[pos[a]] = static_cast<int>(a);
  const std::size_t unknowns = pos.size() * n;

  // value at b_j as a linear map of X_{slot}: identity or -rho(opposite move)
  auto value_map = [&](int j) -> std::pair<int, PadicMatrix> {
    if (E[j].positive) return {slot[j], PadicMatrix::identity(p, n, precision_ + 64)};
    PadicMatrix M = rho(E[j].opposite_move);
    PadicMatrix neg(p, n, n, LONG_MAX / 8);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t s = 0; s < n; ++s) neg(r, s) = -M(r, s);
    return {slot[E[j].opposite], neg};
  };

  std::vector<std::vector<PadicNumber>> rows;
  auto add_block = [&](std::vector<std::pair<int, PadicMatrix>> terms) {
    for (std::size_t r = 0; r < n; ++r) {
      std::vector<PadicNumber> row(unknowns, PadicNumber::zero(p, LONG_MAX / 8));
      for (auto& [s, M] : terms)
        for (std::size_t c = 0; c < n; ++c) row[s * n + c] += M(r, c);
      rows.push_back(std::move(row));
    }
  };
  for (const auto& v : domain_->vertices()) {
    std::vector<std::pair<int, PadicMatrix>> terms;
    for (const auto& [j, eta] : v.star) {
      auto [s, M] = value_map(j);
      terms.emplace_back(s, rho(eta) * M);
    }
    add_block(terms);
  }
  for (int j : pos)
    for (const auto& s : E[j].stabilizer) {
      if (s == group().identity()) continue;
      add_block({{slot[j], rho(s) - PadicMatrix::identity(p, n, precision_ + 64)}});
    }

  PadicMatrix A(p, rows.size(), unknowns, precision_);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    long mv = LONG_MAX;
    for (const auto& x : rows[r])
      if (!x.is_zero()) mv = std::min(mv, x.valuation());
    for (std::size_t c = 0; c < unknowns; ++c)
      A(r, c) = (mv == LONG_MAX ? rows[r][c] : rows[r][c].shifted(-mv)).with_precision(precision_);
  }
  PadicMatrix B(p, rows.size(), 1, precision_);
  for (std::size_t r = 0; r < rows.size(); ++r) B(r, 0) = PadicNumber::zero(p, precision_);
  auto sol = solve_linear(A, B, precision_ / 2);

  basis_.clear();
  for (auto& kv : sol.kernel) {
    long mv = LONG_MAX;
    for (const auto& x : kv)
      if (!x.is_zero()) mv = std::min(mv, x.valuation());
    std::vector<VkElement> X(pos.size(), VkElement(n));
    for (std::size_t a = 0; a < pos.size(); ++a)
      for (std::size_t i = 0; i < n; ++i) X[a][i] = kv[a * n + i].shifted(-mv);
    basis_.push_back(from_positive(X));
  }
  basis_ready_ = true;
  return basis_;
}

HarmonicCocycle CocycleSpace::combination(const std::vector<PadicNumber>& coefficients) const {
  const auto& B = basis();
  HarmonicCocycle c;
  c.k = k_;
  c.values.assign(domain_->edges().size(), vk_zero(prime(), k_, LONG_MAX / 8));
  for (std::size_t b = 0; b < B.size(); ++b)
    for (std::size_t j = 0; j < c.values.size(); ++j)
      for (std::size_t i = 0; i < c.values[j].size(); ++i) c.values[j][i] += coefficients[b] * B[b].values[j][i];
  return c;
}

std::vector<PadicNumber> CocycleSpace::coordinates(const HarmonicCocycle& c) const {
  const auto& B = basis();
  const auto pos = domain_->positive_edges();
  const std::size_t n = static_cast<std::size_t>(k_) + 1;
  PadicMatrix A(prime(), pos.size() * n, B.size(), precision_);
  std::vector<PadicNumber> rhs;
  for (std::size_t a = 0; a < pos.size(); ++a)
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t b = 0; b < B.size(); ++b) A(a * n + i, b) = B[b].values[pos[a]][i];
      rhs.push_back(c.values[pos[a]][i]);
    }
  auto sol = solve_linear(A, rhs, precision_ / 2);
  if (sol.rank != B.size()) throw PrecisionError("cocycle basis is degenerate at working precision");
  return sol.solutions[0];
}

VkElement CocycleSpace::value(const HarmonicCocycle& c, const NormalizedEdge& e) const {
  auto [gamma, j] = domain_->locate_edge(e);
  return act(gamma, c.values[j]);
}

VkElement CocycleSpace::value(const HarmonicCocycle& c, const PMat2& g) const {
  return value(c, normalize_edge(g).edge);
}

long CocycleSpace::harmonicity_defect(const HarmonicCocycle& c) const {
  long worst = LONG_MAX;
  for (const auto& v : domain_->vertices()) {
    VkElement s = vk_zero(prime(), k_, LONG_MAX / 8);
    for (const auto& e : v.star_edges) s = vk_add(s, value(c, e));
    worst = std::min(worst, vk_valuation(s));
  }
  const auto& E = domain_->edges();
  for (std::size_t j = 0; j < E.size(); ++j) {
    for (const auto& s : E[j].stabilizer) worst = std::min(worst, vk_valuation(vk_sub(act(s, c.values[j]), c.values[j])));
    VkElement o = value(c, opposite(E[j].edge));
    worst = std::min(worst, vk_valuation(vk_add(o, c.values[j])));
  }
  return worst;
}

HarmonicCocycle CocycleSpace::transport(const HarmonicCocycle& c, const QuatElem& w) const {
  const auto& E = domain_->edges();
  const QuatElem winv = group().inverse(w);
  HarmonicCocycle out;
  out.k = k_;
  for (std::size_t j = 0; j < E.size(); ++j) {
    auto [gamma, jj] = domain_->locate_edge(group().act(winv, E[j].edge));
    out.values.push_back(act(w, act(gamma, c.values[jj])));
  }
  return out;
}

PadicMatrix CocycleSpace::transport_matrix(const QuatElem& w) const {
  const auto& B = basis();
  PadicMatrix M(prime(), B.size(), B.size(), precision_);
  for (std::size_t b = 0; b < B.size(); ++b) {
    auto coords = coordinates(transport(B[b], w));
    for (std::size_t a = 0; a < B.size(); ++a) M(a, b) = coords[a];
  }
  return M;
}

VkElement CocycleSpace::automorphic_value(const HarmonicCocycle& c, const PMat2& g) const {
  return vk_act(g.inverse(), value(c, g));
}

VkElement CocycleSpace::automorphic_up(const HarmonicCocycle& c, int j) const {
  const unsigned p = prime();
  const long prec = precision_ + 8;
  const PMat2 b = PMat2::from_integer(p, domain_->edges()[j].edge.m, prec);
  VkElement out = vk_zero(p, k_, LONG_MAX / 8);
  for (unsigned l = 0; l < p; ++l) {
    VkElement phi = automorphic_value(c, b * alpha_matrix(p, l));
    for (long i = 0; i <= k_; ++i)
      for (long nu = 0; nu <= i; ++nu) {
        mpz_class coef = binomial(i, nu) * prime_power(p, nu);
        mpz_class lp;
        mpz_ui_pow_ui(lp.get_mpz_t(), l, static_cast<unsigned long>(i - nu));
        out[i] += phi[nu].mul_integer(coef * lp);
      }
  }
  return out;
}

VkElement CocycleSpace::automorphic_wp(const HarmonicCocycle& c, int j) const {
  const unsigned p = prime();
  const long prec = precision_ + 8;
  const PMat2 g0 = PMat2::from_integer(p, g0_matrix(p), prec);
  const PMat2 b = PMat2::from_integer(p, domain_->edges()[j].edge.m, prec);
  return vk_act(g0, automorphic_value(c, b * g0));
}

QuatElem normalizer_element(const ArithmeticGroup& group, long d, int max_s) {
  const auto& O = group.order();
  const unsigned p = group.prime();
  for (int s = 0; s <= max_s; ++s) {
    const mpz_class n = mpz_class(d) * prime_power(p, 2 * s);
    mpz_class coprime = n;
    while (coprime % p == 0) coprime /= p;
    for (const auto& x : enumerate_norm(O, n)) {
      const IntVector xc = O.conjugate(x);
      bool ok = true;
      for (int i = 0; i < 4 && ok; ++i) {
        IntVector e(4, 0);
        e[i] = 1;
        for (const auto& c : O.multiply(O.multiply(x, e), xc))
          if (c % coprime != 0) {
            ok = false;
            break;
          }
      }
      if (ok) return group.normalize(x);
    }
  }
  throw DomainError("no normalizing element of the requested norm found");
}

}  // namespace lop
