#pragma once

// Acceptance experiments: scaled reproductions of the headline claims, each
// reduced to a single pass/fail verdict with a one-line explanation.

#include "lhp/driver.hpp"

#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace lhp {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;  // wall time, excluding runs served from the cache
};

class AcceptanceSuite {
 public:
  static constexpr int kCount = 12;

  /// `out_dir` non-empty: every adaptive run writes its logs there.
  explicit AcceptanceSuite(std::string out_dir = {});

  static std::string name(int id);
  /// Throws std::out_of_range for ids outside 1..kCount.
  CriterionResult run(int id);
  /// Runs the ids in order, reporting each line to `progress` as it finishes.
  std::vector<CriterionResult> run_all(const std::vector<int>& ids, std::ostream* progress = nullptr);

  /// Adaptive runs are cached by configuration; several criteria share runs.
  struct Run {
    RunLog log;
    RunState state;
  };
  const Run& adaptive(const RunConfig& cfg);

 private:
  std::string out_dir_;
  std::map<std::string, std::unique_ptr<Run>> cache_;
};

/// `[PASS] 3 name: detail (12.3 s)`.
std::string format_result(const CriterionResult& r);

}  // namespace lhp
