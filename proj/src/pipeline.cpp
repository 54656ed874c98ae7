#include "lop/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <queue>
#include <random>
#include <sstream>

#include "json.hpp"

namespace lop {

using nlohmann::ordered_json;

namespace {

bool is_prime(long n) {
  if (n < 2) return false;
  for (long q = 2; q * q <= n; ++q)
    if (n % q == 0) return false;
  return true;
}

ordered_json padic_json(const PadicNumber& x) {
  ordered_json j;
  j["valuation"] = x.is_zero() ? ordered_json(nullptr) : ordered_json(x.valuation());
  j["digits"] = x.digits();
  j["precision"] = x.precision();
  j["text"] = x.to_string();
  return j;
}

ordered_json slopes_json(const std::vector<NewtonSlope>& slopes) {
  ordered_json out = ordered_json::array();
  for (const auto& s : slopes) out.push_back({{"slope", s.slope.get_str()}, {"multiplicity", s.multiplicity}});
  return out;
}

ordered_json config_json(const RunConfig& c) {
  return {{"p", c.p},
          {"nminus", c.nminus},
          {"nplus", c.nplus},
          {"splitting_variant", c.splitting_variant}};
}

ordered_json matrix_json(const IMat2& m) {
  return ordered_json::array({m.a().get_str(), m.b().get_str(), m.c().get_str(), m.d().get_str()});
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

// p^u iota(x) b_j sigma = +-p^r g
bool reduction_holds(const FundamentalDomain& fd, const IMat2& g) {
  const auto& G = fd.group();
  const unsigned p = fd.prime();
  const long W = 12;
  auto red = fd.reduce_edge(g, W);
  const long r = G.denominator_exponent(red.gamma);
  const long prec = W + 4 * r + 20;
  PMat2 lhs = (G.matrix(red.gamma, prec) * PMat2::from_integer(p, fd.edges()[red.index].edge.m, prec)) * red.sigma;
  lhs = lhs.shifted(red.u_exponent);
  PMat2 rhs = PMat2::from_integer(p, g, prec).shifted(r);
  const long m = W - 2 * r - 4;
  return lhs.equals_mod(rhs, m) || lhs.scaled(PadicNumber::from_integer(p, -1, prec)).equals_mod(rhs, m);
}

bool quotient_connected(const FundamentalDomain& fd) {
  const auto& V = fd.vertices();
  if (V.empty()) return false;
  std::vector<std::vector<int>> adj(V.size());
  for (const auto& e : fd.edges()) {
    adj[e.source].push_back(e.target);
    adj[e.target].push_back(e.source);
  }
  std::vector<bool> seen(V.size(), false);
  std::queue<int> q;
  q.push(0);
  seen[0] = true;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int w : adj[u])
      if (!seen[w]) {
        seen[w] = true;
        q.push(w);
      }
  }
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

std::string pad(const std::string& s, std::size_t w) { return s.size() >= w ? s + " " : s + std::string(w - s.size(), ' '); }

std::string slope_list(const ordered_json& a) {
  std::string out;
  for (const auto& s : a) {
    if (!out.empty()) out += ", ";
    out += s["slope"].get<std::string>() + "_" + std::to_string(s["multiplicity"].get<long>());
  }
  return out;
}

}  // namespace

void validate(const RunConfig& c) {
  if (!is_prime(static_cast<long>(c.p))) throw DomainError("p must be prime");
  if (c.nminus < 2) throw DomainError("nminus must be a product of an odd number of distinct primes");
  if (c.nplus < 1) throw DomainError("nplus must be positive");
  if (std::gcd(static_cast<long>(c.p), c.nminus * c.nplus) != 1) throw DomainError("p must be coprime to nminus * nplus");
  if (std::gcd(c.nminus, c.nplus) != 1) throw DomainError("nminus and nplus must be coprime");
  for (long q = 2; q * q <= c.nminus; ++q)
    if (c.nminus % (q * q) == 0) throw DomainError("nminus must be squarefree");
  if (c.weights.empty()) throw DomainError("no weight given");
  for (long w : c.weights)
    if (w < 2 || w % 2 != 0) throw DomainError("weights must be even and at least 2");
  if (c.precision < 1) throw DomainError("precision must be positive");
}

Deadline::Deadline(double seconds)
    : end_(std::chrono::steady_clock::now() +
           std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(seconds))),
      unlimited_(seconds <= 0) {}

bool Deadline::expired() const { return !unlimited_ && std::chrono::steady_clock::now() >= end_; }

void Deadline::check(const std::string& stage) const {
  if (expired()) throw BudgetExceeded("time budget exhausted before " + stage);
}

Session::Session(RunConfig config) : config_(std::move(config)) { validate(config_); }

std::string Session::cache_file() const {
  if (config_.cache_dir.empty()) return {};
  std::ostringstream name;
  name << "fdomain-p" << config_.p << "-nm" << config_.nminus << "-np" << config_.nplus << "-s"
       << config_.splitting_variant << ".json";
  return (std::filesystem::path(config_.cache_dir) / name.str()).string();
}

std::shared_ptr<const FundamentalDomain> Session::domain() {
  if (domain_) return domain_;
  auto O = QuaternionOrder::maximal(build_algebra(config_.nminus, config_.p));
  if (config_.nplus > 1) O = O.eichler(config_.nplus);
  ArithmeticGroup G(O, config_.p, config_.splitting_variant);
  const std::string file = cache_file();
  if (!file.empty() && std::filesystem::exists(file)) {
    try {
      std::ifstream in(file);
      ordered_json j = ordered_json::parse(in);
      if (j.at("schema_version").get<int>() == kCacheSchemaVersion &&
          j.at("canonical_form_version").get<int>() == kCanonicalFormVersion && j.at("config") == config_json(config_)) {
        domain_ = std::make_shared<const FundamentalDomain>(FundamentalDomain::from_json(j.at("domain").dump(), G));
        from_cache_ = true;
        return domain_;
      }
    } catch (const std::exception&) {
      // stale or unreadable cache entries are recomputed
    }
  }
  domain_ = std::make_shared<const FundamentalDomain>(FundamentalDomain::compute(G));
  from_cache_ = false;
  if (!file.empty()) {
    std::filesystem::create_directories(config_.cache_dir);
    ordered_json j;
    j["schema_version"] = kCacheSchemaVersion;
    j["canonical_form_version"] = kCanonicalFormVersion;
    j["config"] = config_json(config_);
    j["domain"] = ordered_json::parse(domain_->to_json());
    const std::string tmp = file + ".tmp";
    {
      std::ofstream out(tmp);
      out << j.dump() << "\n";
    }
    std::filesystem::rename(tmp, file);
  }
  return domain_;
}

std::unique_ptr<CocycleSpace> Session::space(long weight, long precision) {
  auto fd = domain();
  const long k = weight - 2;
  return std::make_unique<CocycleSpace>(fd, k, cocycle_precision_for(*fd, k, precision));
}

Report fdomain_report(Session& session) {
  auto fd = session.domain();
  const auto& cfg = session.config();
  ordered_json j;
  j["command"] = "fdomain";
  j["config"] = config_json(cfg);
  j["vertex_count"] = fd->vertices().size();
  j["edge_count"] = fd->positive_edges().size();
  ordered_json vs = ordered_json::array(), es = ordered_json::array();
  for (const auto& v : fd->vertices())
    vs.push_back({{"vertex", matrix_json(v.vertex.m)}, {"stabilizer_order", v.stabilizer.size()}});
  for (int j2 : fd->positive_edges()) {
    const auto& e = fd->edges()[static_cast<std::size_t>(j2)];
    es.push_back({{"edge", matrix_json(e.edge.m)},
                  {"source", e.source},
                  {"target", e.target},
                  {"stabilizer_order", e.stabilizer.size()}});
  }
  j["vertices"] = vs;
  j["edges"] = es;
  j["generator_count"] = fd->generators().size();
  j["quotient_connected"] = quotient_connected(*fd);

  // randomized reduction check driven by the seed
  std::mt19937_64 rng(cfg.seed);
  const int samples = 16;
  int passed = 0;
  for (int t = 0; t < samples; ++t) {
    NormalizedVertex v = base_vertex(cfg.p);
    const int steps = 1 + static_cast<int>(rng() % 6);
    for (int s = 0; s < steps; ++s) v = neighbours(v)[rng() % (cfg.p + 1)];
    auto edges = star(v);
    if (reduction_holds(*fd, edges[rng() % edges.size()].m)) ++passed;
  }
  j["self_check"] = {{"seed", cfg.seed}, {"samples", samples}, {"passed", passed}};
  return {dump(j), passed == samples ? kExitOk : kExitDomain};
}

Report basis_report(Session& session, const Deadline& deadline) {
  const auto& cfg = session.config();
  auto fd = session.domain();
  ordered_json j;
  j["command"] = "basis";
  j["config"] = config_json(cfg);
  ordered_json edges = ordered_json::array();
  for (int e : fd->positive_edges()) edges.push_back(matrix_json(fd->edges()[static_cast<std::size_t>(e)].edge.m));
  j["positive_edges"] = edges;
  ordered_json rows = ordered_json::array();
  int code = kExitOk;
  for (long w : cfg.weights) {
    if (deadline.expired()) {
      rows.push_back({{"weight", w}, {"status", "skipped"}});
      code = kExitBudget;
      continue;
    }
    auto S = session.space(w, cfg.precision);
    ordered_json basis = ordered_json::array();
    for (const auto& c : S->basis()) {
      ordered_json vec = ordered_json::array();
      for (int e : fd->positive_edges()) {
        ordered_json val = ordered_json::array();
        for (const auto& x : c.values[static_cast<std::size_t>(e)]) val.push_back(padic_json(x.with_precision(cfg.precision)));
        vec.push_back(val);
      }
      basis.push_back(vec);
    }
    rows.push_back({{"weight", w}, {"status", "ok"}, {"dimension", S->dimension()}, {"basis", basis}});
  }
  j["weights"] = rows;
  return {dump(j), code};
}

Report linv_report(Session& session, const Deadline& deadline) {
  const auto& cfg = session.config();
  const long w = cfg.weights.front();
  ordered_json j;
  j["command"] = "linv";
  j["config"] = config_json(cfg);
  j["config"]["weight"] = w;
  j["config"]["precision"] = cfg.precision;
  j["config"]["base_point_variant"] = cfg.base_point_variant;
  j["config"]["base_vertex_variant"] = cfg.base_vertex_variant;
  deadline.check("the cocycle basis");
  auto S = session.space(w, cfg.precision);
  j["dimension"] = S->dimension();
  if (S->dimension() == 0) throw DomainError("no harmonic cocycles of weight " + std::to_string(w));
  deadline.check("the L-matrix");
  LOptions opt;
  opt.base_point_variant = cfg.base_point_variant;
  opt.base_vertex_variant = cfg.base_vertex_variant;
  try {
    LInvariant L = l_invariant(*S, cfg.precision, opt);
    ordered_json A = ordered_json::array();
    for (std::size_t r = 0; r < L.data.matrix.rows(); ++r) {
      ordered_json row = ordered_json::array();
      for (std::size_t c = 0; c < L.data.matrix.cols(); ++c) row.push_back(padic_json(L.data.matrix(r, c)));
      A.push_back(row);
    }
    ordered_json cp = ordered_json::array();
    for (const auto& c : L.data.charpoly) cp.push_back(padic_json(c));
    ordered_json roots = ordered_json::array();
    for (const auto& r : L.simple_roots) roots.push_back(padic_json(r));
    j["status"] = "ok";
    j["matrix"] = A;
    j["charpoly"] = cp;
    j["slopes"] = slopes_json(L.slopes);
    j["l_invariant"] = L.value ? padic_json(*L.value) : ordered_json(nullptr);
    j["simple_roots"] = roots;
    j["certified_precision"] = L.data.precision;
    j["lift"] = {{"scale", L.data.lift_scale}, {"level", L.data.lift_level}};
    return {dump(j), kExitOk};
  } catch (const PrecisionError& e) {
    j["status"] = "undecidable";
    j["message"] = std::string("undecidable at precision ") + std::to_string(cfg.precision) + ": " + e.what();
    return {dump(j), kExitUndecidable};
  }
}

Report slopes_report(Session& session, const Deadline& deadline) {
  const auto& cfg = session.config();
  ordered_json j;
  j["command"] = "slopes";
  j["config"] = config_json(cfg);
  j["config"]["precision"] = cfg.precision;
  j["conventions"] = {{"slopes", "valuations of the eigenvalues"},
                      {"atkin_lehner", "classical normalization on S_k(Gamma_0(pN))^new"}};
  ordered_json rows = ordered_json::array();
  bool skipped = false, undecidable = false;
  LOptions opt;
  opt.base_point_variant = cfg.base_point_variant;
  opt.base_vertex_variant = cfg.base_vertex_variant;
  for (long w : cfg.weights) {
    ordered_json row{{"weight", w}};
    if (deadline.expired()) {
      row["status"] = "skipped";
      rows.push_back(row);
      skipped = true;
      continue;
    }
    // double the precision until the Newton polygons are certified
    long M = cfg.precision;
    std::string failure;
    bool done = false;
    for (int attempt = 0; attempt < 3 && !done; ++attempt, M *= 2) {
      if (attempt > 0 && deadline.expired()) break;
      try {
        auto S = session.space(w, M);
        SlopeRow r = slope_row(*S, cfg.nminus, cfg.nplus, M, opt);
        row["status"] = "ok";
        row["dimension"] = r.dimension;
        row["precision_used"] = M;
        row["certified_precision"] = r.precision;
        row["slopes"] = slopes_json(r.slopes);
        row["slopes_plus"] = slopes_json(r.slopes_plus);
        row["slopes_minus"] = slopes_json(r.slopes_minus);
        row["atkin_lehner_p"] = {{"minus", r.wp_minus}, {"plus", r.wp_plus}};
        done = true;
      } catch (const PrecisionError& e) {
        failure = e.what();
      }
    }
    if (!done) {
      if (deadline.expired()) {
        row["status"] = "skipped";
        skipped = true;
      } else {
        row["status"] = "undecidable";
        row["message"] = failure;
        undecidable = true;
      }
    }
    rows.push_back(row);
  }
  j["rows"] = rows;
  return {dump(j), skipped ? kExitBudget : (undecidable ? kExitUndecidable : kExitOk)};
}

std::string render_table(const std::string& command, const std::string& text) {
  ordered_json j = ordered_json::parse(text);
  std::ostringstream out;
  if (command == "slopes") {
    out << pad("k", 5) << pad("d", 5) << pad("alpha+", 22) << pad("alpha-", 22) << "eps_W\n";
    for (const auto& r : j["rows"]) {
      out << pad(std::to_string(r["weight"].get<long>()), 5);
      if (r["status"] != "ok") {
        out << r["status"].get<std::string>() << "\n";
        continue;
      }
      out << pad(std::to_string(r["dimension"].get<long>()), 5) << pad(slope_list(r["slopes_plus"]), 22)
          << pad(slope_list(r["slopes_minus"]), 22);
      std::string eps;
      const long m = r["atkin_lehner_p"]["minus"], pl = r["atkin_lehner_p"]["plus"];
      if (m > 0) eps += "-1_" + std::to_string(m);
      if (pl > 0) eps += (eps.empty() ? "" : ", ") + std::string("1_") + std::to_string(pl);
      out << eps << "\n";
    }
  } else if (command == "linv") {
    out << "weight      " << j["config"]["weight"].get<long>() << "\n";
    out << "dimension   " << j["dimension"].get<long>() << "\n";
    if (j["status"] != "ok") {
      out << "status      " << j["status"].get<std::string>() << "\n" << j["message"].get<std::string>() << "\n";
    } else {
      out << "slopes      " << slope_list(j["slopes"]) << "\n";
      if (!j["l_invariant"].is_null()) out << "L-invariant " << j["l_invariant"]["text"].get<std::string>() << "\n";
      out << "matrix\n";
      for (const auto& row : j["matrix"]) {
        out << " ";
        for (const auto& x : row) out << " [" << x["text"].get<std::string>() << "]";
        out << "\n";
      }
    }
  } else if (command == "basis") {
    out << pad("k", 5) << "d\n";
    for (const auto& r : j["weights"]) {
      out << pad(std::to_string(r["weight"].get<long>()), 5);
      out << (r["status"] == "ok" ? std::to_string(r["dimension"].get<long>()) : r["status"].get<std::string>()) << "\n";
    }
  } else if (command == "fdomain") {
    out << "vertices    " << j["vertex_count"].get<long>() << "\n";
    out << "edges       " << j["edge_count"].get<long>() << "\n";
    out << "generators  " << j["generator_count"].get<long>() << "\n";
    out << "connected   " << (j["quotient_connected"].get<bool>() ? "yes" : "no") << "\n";
    out << "stabilizers";
    for (const auto& v : j["vertices"]) out << " " << v["stabilizer_order"].get<long>();
    out << " |";
    for (const auto& e : j["edges"]) out << " " << e["stabilizer_order"].get<long>();
    out << "\n";
  } else {
    throw DomainError("unknown command " + command);
  }
  return out.str();
}

std::vector<long> parse_weights(const std::string& text) {
  std::vector<long> out;
  const auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      out.push_back(std::stol(text));
    } else {
      const long a = std::stol(text.substr(0, dots)), b = std::stol(text.substr(dots + 2));
      for (long w = a; w <= b; ++w)
        if (w % 2 == 0) out.push_back(w);
    }
  } catch (const std::logic_error&) {
    throw DomainError("cannot parse weights '" + text + "'");
  }
  if (out.empty()) throw DomainError("empty weight range '" + text + "'");
  return out;
}

}  // namespace lop
