#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "lop/loperator.hpp"

namespace lop {

struct RunConfig {
  unsigned p = 0;
  long nminus = 0;
  long nplus = 1;
  std::vector<long> weights{2};
  long precision = 10;
  std::string cache_dir;  // empty: no cache
  std::uint64_t seed = 0;
  double budget_secs = 0;  // 0: unlimited
  int splitting_variant = 0;
  int base_point_variant = 0;
  int base_vertex_variant = 0;
};

// Throws DomainError for parameters outside the supported range.
void validate(const RunConfig& config);

constexpr int kCacheSchemaVersion = 1;

enum ExitCode { kExitOk = 0, kExitUndecidable = 2, kExitDomain = 3, kExitBudget = 4 };

class Deadline {
 public:
  explicit Deadline(double seconds);
  bool expired() const;
  // Throws BudgetExceeded naming the stage once the budget is spent.
  void check(const std::string& stage) const;

 private:
  std::chrono::steady_clock::time_point end_;
  bool unlimited_;
};

// Domain construction with an optional on-disk cache.
class Session {
 public:
  explicit Session(RunConfig config);
  const RunConfig& config() const { return config_; }
  std::shared_ptr<const FundamentalDomain> domain();
  bool domain_from_cache() const { return from_cache_; }
  std::string cache_file() const;
  // Cocycle space of the given weight with enough precision for target precision M.
  std::unique_ptr<CocycleSpace> space(long weight, long precision);

 private:
  RunConfig config_;
  std::shared_ptr<const FundamentalDomain> domain_;
  bool from_cache_ = false;
};

struct Report {
  std::string json;  // pretty-printed, deterministic
  int exit_code = kExitOk;
};

Report fdomain_report(Session& session);
Report basis_report(Session& session, const Deadline& deadline);
Report linv_report(Session& session, const Deadline& deadline);
Report slopes_report(Session& session, const Deadline& deadline);

// Plain-text rendering of a report produced by the functions above.
std::string render_table(const std::string& command, const std::string& json);

// "a..b" (even weights) or a single weight.
std::vector<long> parse_weights(const std::string& text);

}  // namespace lop
