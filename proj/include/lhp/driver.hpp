#pragma once

// Adaptive solve-estimate-mark-refine loops and their logs.

#include "lhp/adapt.hpp"
#include "lhp/eigensolve.hpp"
#include "lhp/problems.hpp"

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace lhp {

enum class Strategy { ER, CRSum, CRMax, LR, MR };

std::string to_string(Strategy s);
/// Accepts ER, CR-sum, CR-max, LR, MR and LR-paused (LR with pausing).
Strategy parse_strategy(const std::string& s);

struct RunConfig {
  std::string problem = "unit_square";
  Strategy strategy = Strategy::LR;
  int M = 20;            // cluster size
  int j = 1;             // target pair for ER
  double tol = 1e-6;     // stopping tolerance on the relative bound
  bool absolute_tol = false;  // stop on max_j eta2_j instead of the relative bound
  int n_max = 30;
  std::int64_t max_dof = 0;   // stop before solving on a larger space; 0 = no limit
  AdaptParams adapt;
  double gamma = 10.0;
  std::uint64_t seed = 1;
  std::string source = "one";
  int pause = 0;                 // skipped eigensolver steps between calls
  bool picard = false;           // switch to Picard refinement when few pairs remain
  int picard_threshold = 30;     // ... namely at most this many unconverged pairs
  std::int64_t mr_threshold = 4000;  // MR: switch LR -> CR-sum above this DOF
  double lanczos_tol = 1e-10;
  double picard_tol = 1e-8;   // floor of the Picard algebraic tolerance
  double picard_rel = 0.01;   // Picard tolerance relative to sqrt(eta2/lambda) of the previous step
  int workers = 1;  // accepted for interface compatibility; loops run on one worker
  bool record_timings = true;

  /// Throws std::invalid_argument on inconsistent settings.
  void validate() const;
  /// Label used in file names: strategy, plus pause/picard suffixes.
  std::string label() const;
};

struct StepRecord {
  int step = 0;
  std::int64_t dof = 0;
  int elements = 0;
  int max_order = 0;
  double eta_land2 = 0.0;
  bool eigen_called = false;
  bool picard_used = false;
  std::vector<double> lambda;    // empty on paused steps
  std::vector<double> eta_eig2;  // empty on paused steps
  std::vector<double> rel_err;   // NaN where no reference value is known
  double eta_max_rel = NAN;
  double eta_max_abs = NAN;
  double e_max_rel = NAN;
  int unconverged = -1;
  std::int64_t backsolves = 0;
  int h_marked = 0, p_marked = 0;
  std::string plan_strategy;  // planner used after this step (empty on the last step)
  double wall_seconds = 0.0;
  double cpu_seconds = 0.0;
  double cpu_eigen_seconds = 0.0;
  double cpu_landscape_seconds = 0.0;
};

struct RunLog {
  RunConfig cfg;
  std::vector<StepRecord> steps;
  std::string terminal;  // "tol", "max-steps" or "max-dof"
  int eigen_calls = 0;
  double total_cpu_eigen = 0.0;
  double total_cpu_landscape = 0.0;
  double total_cpu = 0.0;

  bool stopped_by_tolerance() const { return terminal == "tol"; }
};

/// Final discrete state of a run, for inspection after the loop.
struct RunState {
  CatalogEntry problem;
  Mesh mesh;             // final mesh
  DiscreteField landscape;
  EigenpairSet pairs;    // on `pairs_mesh`
  Mesh pairs_mesh;
  std::vector<IndicatorField> eta_eig;
  IndicatorField eta_land;
};

struct RunOutputs {
  std::string dir;        // empty: no files
  bool dump_meshes = false;
};

RunLog run_single(const RunConfig& cfg, RunState* state = nullptr, const RunOutputs& out = {});
RunLog run_cluster(const RunConfig& cfg, RunState* state = nullptr, const RunOutputs& out = {});
RunLog run_landscape(const RunConfig& cfg, RunState* state = nullptr, const RunOutputs& out = {});
RunLog run_landscape_paused(const RunConfig& cfg, RunState* state = nullptr, const RunOutputs& out = {});
/// Dispatch on cfg.strategy (LR with pause > 0 or picard runs paused).
RunLog run(const RunConfig& cfg, RunState* state = nullptr, const RunOutputs& out = {});

/// Per-step metric table: relative bounds, envelope and exact errors.
struct MetricsRow {
  int step;
  std::int64_t dof;
  std::vector<double> bound;      // eta2_j
  std::vector<double> rel_bound;  // eta2_j / lambda_j
  double eta_max_rel;
  double e_max_rel;  // NaN without reference data
  double cpu_seconds;
};
std::vector<MetricsRow> metrics(const RunLog& log, const ReferenceData* exact = nullptr);

void write_jsonl(std::ostream& os, const RunLog& log);
void write_csv(std::ostream& os, const RunLog& log);
/// Writes <dir>/<problem>_<label>_<seed>.{jsonl,csv}; returns the stem path.
std::string write_logs(const std::string& dir, const RunLog& log);

/// Least-squares fit y = a + b x; returns {b, a, R^2}.
struct LinearFit {
  double slope, intercept, r2;
};
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace lhp
