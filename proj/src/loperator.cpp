#include "lop/loperator.hpp"

#include <algorithm>
#include <climits>
#include <numeric>

namespace lop {

namespace {

long count_prime_factors_shared(long a, long b) {
  long n = 0;
  long g = std::gcd(a, b);
  for (long q = 2; q * q <= g; ++q)
    if (g % q == 0) {
      ++n;
      while (g % q == 0) g /= q;
    }
  if (g > 1) ++n;
  return n;
}

NormalizedVertex choose_vertex(unsigned p, int variant) {
  if (variant == 0) return base_vertex(p);
  auto nb = neighbours(base_vertex(p));
  return nb[static_cast<std::size_t>(variant - 1) % nb.size()];
}

long generator_depth(const FundamentalDomain& fd) {
  long depth = 0;
  const NormalizedVertex v0 = base_vertex(fd.prime());
  for (const auto& g : fd.generators()) depth = std::max(depth, fd.group().act(g, v0).distance());
  return depth + 1;
}

PadicNumber poly_eval(const std::vector<PadicNumber>& f, const PadicNumber& x) {
  PadicNumber acc = f.back();
  for (std::size_t i = f.size() - 1; i-- > 0;) acc = acc * x + f[i];
  return acc;
}

std::vector<PadicNumber> poly_derivative(const std::vector<PadicNumber>& f) {
  std::vector<PadicNumber> out;
  for (std::size_t i = 1; i < f.size(); ++i) out.push_back(f[i].mul_integer(static_cast<long>(i)));
  return out;
}

}  // namespace

VkElement psi_value(const CocycleSpace& space, const HarmonicCocycle& c, const QuatElem& gamma,
                    const NormalizedVertex& v) {
  const NormalizedVertex w = space.group().act(gamma, v);
  const auto path = geodesic(v, w);
  VkElement sum = vk_zero(space.prime(), space.k(), LONG_MAX / 8);
  for (std::size_t i = 0; i + 1 < path.size(); ++i) sum = vk_add(sum, space.value(c, edge_between(path[i], path[i + 1])));
  return sum;
}

long cocycle_precision_for(const FundamentalDomain& fd, long k, long precision) {
  const long depth = generator_depth(fd);
  return precision + extra_moments_for(fd.prime(), k, depth, precision) + 3 * k + 40;
}

LMatrix l_matrix(const CocycleSpace& space, long precision, const LOptions& options) {
  return l_matrix(space, space.basis(), precision, options);
}

LMatrix l_matrix(const CocycleSpace& space, const std::vector<HarmonicCocycle>& basis, long precision,
                 const LOptions& options) {
  const auto& fd = space.domain();
  const auto& G = fd.group();
  const unsigned p = space.prime();
  const long k = space.k();
  const std::size_t d = basis.size();
  if (d == 0) throw DomainError("the space of harmonic cocycles is zero");
  const long M = precision + options.guard_digits;
  const auto& gens = fd.generators();

  long depth = 0;
  {
    BasePoint probe = base_point(p, 20, options.base_point_variant);
    for (const auto& g : gens) depth = std::max(depth, covering_depth(probe.tau, translate(G, g, probe.tau)));
  }
  const long extra = extra_moments_for(p, k, depth, M);
  std::vector<OverconvergentForm> forms;
  long scale = 0;
  for (const auto& c : basis) {
    forms.push_back(lift_moments(space, c, M, extra));
    scale = std::max(scale, forms.back().scale);
  }
  const BasePoint tau = base_point(p, M + (k / 2) * depth + scale + 16, options.base_point_variant);
  const NormalizedVertex v = choose_vertex(p, options.base_vertex_variant);

  // rows: (generator, coordinate); columns: A_{., i} then the coboundary vector
  const std::size_t rows = gens.size() * static_cast<std::size_t>(k + 1);
  const std::size_t cols = d + static_cast<std::size_t>(k + 1);
  PadicMatrix system(p, rows, cols, M);
  PadicMatrix rhs(p, rows, d, M);
  for (std::size_t m = 0; m < gens.size(); ++m) {
    const auto& g = gens[m];
    PathIntegral path(fd, k, tau.tau, translate(G, g, tau.tau), M, scale);
    const auto& R = space.rho(g);
    for (std::size_t l = 0; l < d; ++l) {
      VkElement psi = psi_value(space, basis[l], g, v);
      VkElement lam = lambda_value(path.evaluate(forms[l]));
      for (long P = 0; P <= k; ++P) {
        const std::size_t row = m * static_cast<std::size_t>(k + 1) + static_cast<std::size_t>(P);
        system(row, l) = psi[static_cast<std::size_t>(P)];
        rhs(row, l) = lam[static_cast<std::size_t>(P)];
      }
    }
    for (long P = 0; P <= k; ++P)
      for (long q = 0; q <= k; ++q) {
        PadicNumber e = R(static_cast<std::size_t>(P), static_cast<std::size_t>(q));
        if (P == q) e -= PadicNumber::from_integer(p, 1, e.precision());
        system(m * static_cast<std::size_t>(k + 1) + static_cast<std::size_t>(P), d + static_cast<std::size_t>(q)) = e;
      }
  }

  LinearSolution sol;
  try {
    sol = solve_linear(system, rhs);
  } catch (const InconsistentSystem& e) {
    throw PrecisionError(std::string("lambda is not a combination of psi and a coboundary: ") + e.what());
  }
  // invariants of V_k only exist in weight two
  const std::size_t expected_kernel = k == 0 ? 1 : 0;
  for (const auto& kv : sol.kernel) {
    bool touches = false;
    for (std::size_t l = 0; l < d; ++l)
      if (!kv[l].is_zero()) touches = true;
    if (touches) throw PrecisionError("psi columns are dependent at working precision");
  }
  if (sol.kernel.size() > expected_kernel) throw PrecisionError("coboundary part is not determined at working precision");

  LMatrix out;
  out.matrix = PadicMatrix(p, d, d, M);
  long prec = LONG_MAX;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t l = 0; l < d; ++l) {
      out.matrix(l, i) = sol.solutions[i][l];
      prec = std::min(prec, sol.solutions[i][l].precision());
    }
  prec = std::min(prec, M);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t l = 0; l < d; ++l) out.matrix(l, i) = out.matrix(l, i).with_precision(prec);
  out.precision = prec;
  out.charpoly = charpoly(out.matrix);
  out.lift_scale = scale;
  out.lift_level = forms.front().level;
  return out;
}

PadicNumber simple_root(const std::vector<PadicNumber>& f, const NewtonSlope& slope) {
  if (slope.multiplicity != 1 || slope.slope.get_den() != 1) throw DomainError("slope is not simple");
  const unsigned p = f.front().prime();
  const long s = slope.slope.get_num().get_si();
  // g(y) = p^-c f(p^s y) has a unique unit root, simple modulo p
  std::vector<PadicNumber> g;
  long c = LONG_MAX;
  for (std::size_t i = 0; i < f.size(); ++i) {
    g.push_back(f[i].shifted(s * static_cast<long>(i)));
    if (!g.back().is_zero()) c = std::min(c, g.back().valuation());
  }
  for (auto& x : g) x = x.shifted(-c);
  const auto dg = poly_derivative(g);
  long prec = LONG_MAX;
  for (const auto& x : g) prec = std::min(prec, x.precision());
  PadicNumber y;
  bool found = false;
  for (unsigned r = 1; r < p && !found; ++r) {
    PadicNumber t = PadicNumber::from_integer(p, static_cast<long>(r), prec);
    PadicNumber val = poly_eval(g, t);
    if (val.is_zero() || val.valuation() >= 1) {
      y = t;
      found = true;
    }
  }
  if (!found) throw PrecisionError("no residual root for the simple slope");
  for (long it = 0; it < 200; ++it) {
    PadicNumber val = poly_eval(g, y);
    if (val.is_zero()) break;
    PadicNumber der = poly_eval(dg, y);
    if (der.is_zero() || der.valuation() > 0) throw PrecisionError("residual root is not simple");
    y = y - val / der;
  }
  return y.shifted(s);
}

PadicMatrix atkin_lehner_matrix(const CocycleSpace& space, long d, long nminus) {
  const unsigned p = space.prime();
  PadicMatrix M = space.transport_matrix(normalizer_element(space.group(), d));
  const long flips = count_prime_factors_shared(d, static_cast<long>(p) * nminus);
  if (flips % 2 == 1)
    for (std::size_t a = 0; a < M.rows(); ++a)
      for (std::size_t b = 0; b < M.cols(); ++b) M(a, b) = -M(a, b);
  return M;
}

PadicMatrix involution_eigenspace(const PadicMatrix& M, int eps, long precision) {
  const unsigned p = M.prime();
  const std::size_t n = M.rows();
  PadicMatrix T = M;
  for (std::size_t i = 0; i < n; ++i) T(i, i) -= PadicNumber::from_integer(p, eps, T(i, i).precision());
  PadicMatrix zero(p, n, 1, precision);
  for (std::size_t i = 0; i < n; ++i) zero(i, 0) = PadicNumber::zero(p, precision);
  auto sol = solve_linear(T, zero, precision / 2);
  PadicMatrix V(p, n, sol.kernel.size(), precision);
  for (std::size_t j = 0; j < sol.kernel.size(); ++j)
    for (std::size_t i = 0; i < n; ++i) V(i, j) = sol.kernel[j][i];
  return V;
}

PadicMatrix restrict_to(const PadicMatrix& A, const PadicMatrix& V, long precision) {
  const std::size_t r = V.cols();
  PadicMatrix AV = A * V;
  auto sol = solve_linear(V, AV, precision);
  PadicMatrix X(A.prime(), r, r, precision);
  for (std::size_t j = 0; j < r; ++j)
    for (std::size_t i = 0; i < r; ++i) X(i, j) = sol.solutions[j][i];
  return X;
}

SlopeRow slope_row(const CocycleSpace& space, long nminus, long nplus, long precision, const LOptions& options) {
  SlopeRow row;
  row.weight = space.k() + 2;
  row.dimension = space.dimension();
  if (row.dimension == 0) return row;
  LMatrix L = l_matrix(space, precision, options);
  row.precision = L.precision;
  row.slopes = newton_slopes(L.charpoly);
  const long W = space.precision();
  const PadicMatrix WN = atkin_lehner_matrix(space, nminus * nplus, nminus);
  const PadicMatrix Wp = atkin_lehner_matrix(space, static_cast<long>(space.prime()), nminus);
  for (int eps : {1, -1}) {
    PadicMatrix V = involution_eigenspace(WN, eps, W);
    if (V.cols() == 0) continue;
    PadicMatrix A = restrict_to(L.matrix, V, L.precision);
    auto slopes = newton_slopes(charpoly(A));
    (eps == 1 ? row.slopes_plus : row.slopes_minus) = slopes;
  }
  row.wp_plus = static_cast<long>(involution_eigenspace(Wp, 1, W).cols());
  row.wp_minus = static_cast<long>(involution_eigenspace(Wp, -1, W).cols());
  return row;
}

LInvariant l_invariant(const CocycleSpace& space, long precision, const LOptions& options) {
  LInvariant out;
  out.data = l_matrix(space, precision, options);
  if (out.data.matrix.rows() == 1) {
    out.value = out.data.matrix(0, 0);
    out.simple_roots.push_back(*out.value);
    out.slopes = newton_slopes(out.data.charpoly);
    return out;
  }
  out.slopes = newton_slopes(out.data.charpoly);
  for (const auto& s : out.slopes)
    if (s.multiplicity == 1) out.simple_roots.push_back(simple_root(out.data.charpoly, s));
  if (out.simple_roots.size() == 1) out.value = out.simple_roots.front();
  return out;
}

std::string format_slope(const NewtonSlope& s) { return s.slope.get_str() + "_" + std::to_string(s.multiplicity); }

}  // namespace lop
