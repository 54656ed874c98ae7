#include "lop/overconv.hpp"

#include <algorithm>
#include <climits>

#include "lop/series.hpp"

namespace lop {

namespace {

mpz_class reduce(const mpz_class& x, const mpz_class& mod) {
  mpz_class r = x % mod;
  if (r < 0) r += mod;
  return r;
}

mpz_class binomial(long n, long r) {
  mpz_class out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(r));
  return out;
}

}  // namespace

long OverconvergentForm::stored_precision(long i) const {
  if (i <= k) return low_precision;
  const long s = i - k;
  return std::min(modulus_exponent - k / 2, std::max(0L, iterations - s + 1));
}

PadicNumber OverconvergentForm::moment(int j, long i) const {
  return PadicNumber::from_integer(p, moments[j][i], stored_precision(i)).shifted(-scale);
}

UpTable::UpTable(const FundamentalDomain& domain, long precision) : precision_(precision) {
  const unsigned p = domain.prime();
  for (const auto& e : domain.edges()) {
    std::vector<Step> row;
    for (unsigned l = 0; l < p; ++l) {
      auto red = domain.reduce_edge(e.edge.m * alpha_matrix(p, l), precision);
      row.push_back({red.index, red.sigma});
    }
    steps_.push_back(std::move(row));
  }
}

UpOperator::UpOperator(const UpTable& table, unsigned p, long k, long level, long modulus_exponent)
    : p_(p), k_(k), level_(level), modulus_(modulus_exponent) {
  if (table.precision() < modulus_exponent) throw PrecisionError("U_p table precision below the working modulus");
  const std::size_t rows = static_cast<std::size_t>(k + level) + 1;
  const mpz_class& mod = prime_power(p, modulus_exponent);
  blocks_.resize(table.size());
  targets_.resize(table.size());
  for (std::size_t j = 0; j < table.size(); ++j) {
    for (unsigned l = 0; l < p; ++l) {
      const auto& st = table.step(static_cast<int>(j), l);
      auto T = sigma0_matrix(st.sigma, k, rows, rows - 1, modulus_exponent);
      // row i: sum_nu C(i, nu) p^nu l^(i - nu) T[nu]
      std::vector<std::vector<mpz_class>> B(rows, std::vector<mpz_class>(rows, 0));
      for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t nu = 0; nu <= i; ++nu) {
          if (l == 0 && nu != i) continue;
          mpz_class lp;
          mpz_ui_pow_ui(lp.get_mpz_t(), l, i - nu);
          mpz_class coef = reduce(binomial(static_cast<long>(i), static_cast<long>(nu)) *
                                      prime_power(p, static_cast<long>(nu)) * lp,
                                  mod);
          if (coef == 0) continue;
          for (std::size_t m = 0; m < rows; ++m) B[i][m] += coef * T[nu][m];
        }
      for (auto& row : B)
        for (auto& x : row) x = reduce(x, mod);
      blocks_[j].push_back(std::move(B));
      targets_[j].push_back(st.target);
    }
  }
}

OverconvergentForm UpOperator::apply(const OverconvergentForm& form) const {
  if (form.k != k_ || form.level != level_ || form.modulus_exponent != modulus_)
    throw DomainError("U_p operator does not match the form's weight, level or modulus");
  const std::size_t rows = form.moment_count();
  const mpz_class& mod = prime_power(p_, modulus_);
  const mpz_class& half = prime_power(p_, k_ / 2);
  OverconvergentForm out = form;
  for (std::size_t j = 0; j < blocks_.size(); ++j) {
    std::vector<mpz_class> acc(rows, 0);
    for (std::size_t l = 0; l < blocks_[j].size(); ++l) {
      const auto& B = blocks_[j][l];
      const auto& src = form.moments[targets_[j][l]];
      for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t m = 0; m < rows; ++m)
          if (B[i][m] != 0 && src[m] != 0) acc[i] += B[i][m] * src[m];
    }
    for (std::size_t i = 0; i < rows; ++i) {
      mpz_class s = reduce(acc[i], mod);
      if (s % half != 0)
        throw DomainError("U_p iteration left the integral lattice at moment " + std::to_string(i));
      out.moments[j][i] = s / half;
    }
  }
  out.iterations = form.iterations + 1;
  out.low_precision = std::min(form.low_precision, modulus_ - k_ / 2);
  return out;
}

std::vector<VkElement> automorphic_values(const CocycleSpace& space, const HarmonicCocycle& c) {
  const auto& E = space.domain().edges();
  const long prec = space.precision() + 16;
  std::vector<VkElement> out;
  for (std::size_t j = 0; j < E.size(); ++j) {
    PMat2 b = PMat2::from_integer(space.prime(), E[j].edge.m, prec);
    out.push_back(vk_act(b.inverse(), c.values[j]));
  }
  return out;
}

OverconvergentForm initial_lift(const CocycleSpace& space, const HarmonicCocycle& c, long level) {
  const unsigned p = space.prime();
  const long k = space.k();
  const auto& fd = space.domain();
  const auto& E = fd.edges();
  const std::size_t rows = static_cast<std::size_t>(k + level) + 1;
  const auto phi = automorphic_values(space, c);

  long prec = LONG_MAX;
  for (const auto& w : phi)
    for (const auto& x : w) prec = std::min(prec, x.precision());

  std::vector<std::vector<PadicNumber>> lift(E.size());
  for (std::size_t j = 0; j < E.size(); ++j) {
    const auto& S = E[j].stabilizer;
    const IMat2& b = E[j].edge.m;
    const long vb = valuation_of(p, b.det());
    std::vector<PadicNumber> acc(rows, PadicNumber::zero(p, prec));
    for (const auto& s : S) {
      const long r = fd.group().denominator_exponent(s);
      const long wp = prec + 2 * vb + 2 * r + 8;
      PMat2 sigma = (PMat2::from_integer(p, b.adjugate(), wp) * fd.group().matrix(s, wp)) * b;
      sigma = sigma.shifted(-(vb + r));
      auto T = sigma0_matrix(sigma, k, rows, static_cast<std::size_t>(k), prec + 8);
      for (std::size_t m = 0; m < rows; ++m)
        for (long i = 0; i <= k; ++i) acc[m] += phi[j][i].mul_integer(T[m][i]);
    }
    const PadicNumber inv = PadicNumber::from_integer(p, static_cast<long>(S.size()), prec + 8).inverse();
    for (auto& x : acc) x = x * inv;
    for (long i = 0; i <= k; ++i) acc[i] = phi[j][i];
    lift[j] = std::move(acc);
  }

  // global scale: integrality and v(m_i) >= k/2 - i for i <= k/2
  long t = 0;
  for (const auto& w : lift)
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i].is_zero()) continue;
      long need = -w[i].valuation();
      if (static_cast<long>(i) <= k / 2) need = k / 2 - static_cast<long>(i) - w[i].valuation();
      t = std::max(t, need);
    }

  OverconvergentForm form;
  form.p = p;
  form.k = k;
  form.level = level;
  form.scale = t;
  long low = LONG_MAX;
  for (const auto& w : lift)
    for (long i = 0; i <= k; ++i) low = std::min(low, w[i].precision() + t);
  form.low_precision = low;
  form.modulus_exponent = low;
  const mpz_class& mod = prime_power(p, low);
  for (const auto& w : lift) {
    std::vector<mpz_class> row;
    for (const auto& x : w) {
      PadicNumber y = x.shifted(t);
      row.push_back(y.is_zero() ? mpz_class(0) : reduce(y.with_precision(low).lift(), mod));
    }
    form.moments.push_back(std::move(row));
  }
  form.iterations = 0;
  return form;
}

void reset_low_moments(OverconvergentForm& form, const OverconvergentForm& source) {
  for (std::size_t j = 0; j < form.moments.size(); ++j)
    for (long i = 0; i <= form.k; ++i) form.moments[j][i] = source.moments[j][i];
  form.low_precision = source.low_precision;
}

OverconvergentForm lift_moments(const CocycleSpace& space, const HarmonicCocycle& c, long precision,
                                long extra_moments, const LiftOptions& options) {
  const long k = space.k();
  long t = initial_lift(space, c, 1).scale;
  long level = 0;
  OverconvergentForm start;
  for (;;) {
    level = std::max(1L, precision + extra_moments - 1 + t + 2);
    start = initial_lift(space, c, level);
    if (start.scale <= t) break;
    t = start.scale;
  }
  if (start.modulus_exponent < level + 1 + k / 2)
    throw PrecisionError("cocycle precision too low for the requested lift");
  UpTable table(space.domain(), start.modulus_exponent);
  UpOperator op(table, space.prime(), k, level, start.modulus_exponent);
  OverconvergentForm form = start;
  const long iterations = level + options.extra_iterations;
  for (long r = 0; r < iterations; ++r) {
    form = op.apply(form);
    reset_low_moments(form, start);
  }
  return form;
}

PadicNumber moment(const OverconvergentForm& form, const FundamentalDomain& domain, const PMat2& g, long i) {
  return moments(form, domain, g, i + 1)[i];
}

std::vector<PadicNumber> moments(const OverconvergentForm& form, const FundamentalDomain& domain, const PMat2& g,
                                 long count) {
  return moments(form, domain.reduce_edge(g, form.modulus_exponent), count);
}

std::vector<PadicNumber> moments(const OverconvergentForm& form, const EdgeReduction& red, long count) {
  const std::size_t rows = form.moment_count();
  if (count > static_cast<long>(rows)) throw DomainError("moment index beyond the level of the lift");
  auto T = sigma0_matrix(red.sigma, form.k, static_cast<std::size_t>(count), rows - 1, form.modulus_exponent);
  std::vector<PadicNumber> out;
  for (long i = 0; i < count; ++i) {
    PadicNumber s = PadicNumber::zero(form.p, form.modulus_exponent);
    for (std::size_t m = 0; m < rows; ++m)
      if (T[i][m] != 0) s += form.moment(red.index, static_cast<long>(m)).mul_integer(T[i][m]);
    // neglected moments beyond the level have coefficients divisible by p^(m - i)
    out.push_back(s.with_precision(static_cast<long>(rows) - i - form.scale));
  }
  return out;
}

}  // namespace lop
