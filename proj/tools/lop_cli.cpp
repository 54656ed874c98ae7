#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "lop/pipeline.hpp"

namespace {

struct Flags {
  lop::RunConfig config;
  std::string weights;
  long weight = 0;
  std::string format = "json";
};

void add_flags(CLI::App* cmd, Flags& f, bool weights) {
  cmd->add_option("--p", f.config.p, "prime p")->required();
  cmd->add_option("--nminus", f.config.nminus, "discriminant of the quaternion algebra")->required();
  cmd->add_option("--nplus", f.config.nplus, "Eichler level")->capture_default_str();
  if (weights) {
    cmd->add_option("--weight", f.weight, "even weight k + 2");
    cmd->add_option("--weights", f.weights, "weight range a..b (even weights)");
  }
  cmd->add_option("--prec", f.config.precision, "p-adic precision M")->capture_default_str();
  cmd->add_option("--format", f.format, "json or table")->check(CLI::IsMember({"json", "table"}))->capture_default_str();
  cmd->add_option("--cache-dir", f.config.cache_dir, "domain cache directory")->envname("CACHE_DIR");
  cmd->add_option("--budget-secs", f.config.budget_secs, "time budget in seconds, 0 for none");
  cmd->add_option("--seed", f.config.seed, "seed for randomized self-checks")->capture_default_str();
  cmd->add_option("--splitting-variant", f.config.splitting_variant, "alternative splitting choice");
  cmd->add_option("--base-point-variant", f.config.base_point_variant, "alternative base point tau");
  cmd->add_option("--base-vertex-variant", f.config.base_vertex_variant, "alternative base vertex");
}

int run(const std::string& command, Flags& f) {
  if (!f.weights.empty())
    f.config.weights = lop::parse_weights(f.weights);
  else if (f.weight != 0)
    f.config.weights = {f.weight};
  lop::Session session(f.config);
  const lop::Deadline deadline(f.config.budget_secs);
  lop::Report report;
  if (command == "fdomain")
    report = lop::fdomain_report(session);
  else if (command == "basis")
    report = lop::basis_report(session, deadline);
  else if (command == "linv")
    report = lop::linv_report(session, deadline);
  else
    report = lop::slopes_report(session, deadline);
  if (session.domain_from_cache())
    std::cerr << "domain loaded from " << session.cache_file() << " with "
              << session.domain()->construction_searches() << " equivalence searches\n";
  else
    std::cerr << "domain computed with " << session.domain()->construction_searches() << " equivalence searches\n";
  std::cout << (f.format == "table" ? lop::render_table(command, report.json) : report.json);
  return report.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"p-adic L-operators of quaternionic arithmetic groups"};
  app.require_subcommand(1);
  Flags f;
  std::string command;
  for (const auto& [name, help, weights] :
       {std::tuple{"fdomain", "fundamental domain summary", false}, std::tuple{"basis", "harmonic cocycle bases", true},
        std::tuple{"linv", "L-operator and L-invariant", true}, std::tuple{"slopes", "slope table", true}}) {
    CLI::App* cmd = app.add_subcommand(name, help);
    add_flags(cmd, f, weights);
    cmd->callback([&command, n = std::string(name)] { command = n; });
  }
  CLI11_PARSE(app, argc, argv);
  try {
    return run(command, f);
  } catch (const lop::BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return lop::kExitBudget;
  } catch (const lop::PrecisionError& e) {
    std::cerr << "undecidable: " << e.what() << "\n";
    return lop::kExitUndecidable;
  } catch (const lop::InconsistentSystem& e) {
    std::cerr << "undecidable: " << e.what() << "\n";
    return lop::kExitUndecidable;
  } catch (const lop::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return lop::kExitDomain;
  }
}
