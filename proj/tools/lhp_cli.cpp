// landscape_hp: list the problem catalog, run adaptive experiments, write the
// 1D laboratory data files and run the acceptance experiments.

#include "lhp/acceptance.hpp"
#include "lhp/driver.hpp"
#include "lhp/lab1d.hpp"
#include "lhp/problems.hpp"
#include "lhp/runtime.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

namespace {

using namespace lhp;

constexpr int kExitTol = 0;
constexpr int kExitError = 1;
constexpr int kExitNoTol = 2;

struct RunFlags {
  RunConfig cfg;
  std::string strategy = "LR";
  std::string out;
  bool dump_meshes = false;
  bool no_timings = false;
};

void add_run_flags(CLI::App* app, RunFlags& f, bool single_strategy) {
  RunConfig& c = f.cfg;
  app->add_option("--problem", c.problem, "catalog entry (see `list`)")->capture_default_str();
  if (single_strategy)
    app->add_option("--strategy", f.strategy, "ER, CR-sum, CR-max, LR, MR or LR-paused")->capture_default_str();
  app->add_option("--M", c.M, "cluster size")->capture_default_str();
  app->add_option("--j", c.j, "target pair for ER")->capture_default_str();
  app->add_option("--tol", c.tol, "stopping tolerance on the relative envelope (0: run n_max steps)")
      ->capture_default_str();
  app->add_flag("--abs-tol", c.absolute_tol, "stop on the absolute envelope instead");
  app->add_option("--nmax", c.n_max, "maximum number of steps")->capture_default_str();
  app->add_option("--max-dof", c.max_dof, "stop before solving on a larger space (0: no limit)")
      ->capture_default_str();
  app->add_option("--r", c.adapt.r, "percent of elements marked")->capture_default_str();
  app->add_option("--tol-ana", c.adapt.tol_ana, "smoothness threshold for p-refinement")->capture_default_str();
  app->add_option("--p-max", c.adapt.p_max, "maximum polynomial order")->capture_default_str();
  app->add_flag("--h-only", c.adapt.h_only, "split p-marked elements instead of raising their order");
  app->add_option("--gamma", c.gamma, "SIPG penalty parameter")->capture_default_str();
  app->add_option("--seed", c.seed, "seed for potentials and eigensolver start vectors")->capture_default_str();
  app->add_option("--source", c.source, "source term: one or 1-3x")->capture_default_str();
  app->add_option("--pause", c.pause, "eigensolver steps skipped between calls (LR/MR)")->capture_default_str();
  app->add_flag("--picard", c.picard, "switch to Picard refinement when few pairs remain unconverged");
  app->add_option("--picard-threshold", c.picard_threshold, "unconverged pair count enabling Picard")
      ->capture_default_str();
  app->add_option("--mr-threshold", c.mr_threshold, "MR: DOF above which CR-sum takes over")->capture_default_str();
  app->add_option("--workers", c.workers, "worker count (loops run on one worker)")->capture_default_str();
  app->add_flag("--dump-meshes", f.dump_meshes, "write mesh, indicator and plan dumps per step");
  app->add_flag("--no-timings", f.no_timings, "record zero timings (byte-reproducible logs)");
  app->add_option("--out", f.out, "output directory (default $LANDSCAPE_HP_OUT or ./runs)");
}

std::string output_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("LANDSCAPE_HP_OUT"); env && *env) return env;
  return "runs";
}

void print_summary(const RunLog& log, const std::string& dir) {
  const StepRecord& s = log.steps.back();
  std::printf("%s %s seed %llu -> %s: %s after %zu steps, %lld DOF, eta2_max_rel %.3e, eigensolver calls %d, CPU %.2f s\n",
              log.cfg.problem.c_str(), log.cfg.label().c_str(), static_cast<unsigned long long>(log.cfg.seed),
              dir.c_str(), log.terminal.c_str(), log.steps.size(), static_cast<long long>(s.dof), s.eta_max_rel,
              log.eigen_calls, log.total_cpu);
}

RunLog run_one(RunConfig cfg, const RunFlags& f) {
  cfg.record_timings = !f.no_timings;
  cfg.validate();
  catalog(cfg.problem, cfg.seed);  // reject unknown names before any output
  RunOutputs out{output_dir(f.out), f.dump_meshes};
  RunLog log = run(cfg, nullptr, out);
  print_summary(log, out.dir);
  return log;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

template <class T>
std::vector<T> parse_ints(const std::string& s) {
  std::vector<T> out;
  for (const auto& item : split_list(s)) out.push_back(static_cast<T>(std::stoll(item)));
  return out;
}

struct LabFlags {
  std::uint64_t seed = 1;
  int pieces = 32;
  double vmin = lab1d::kPublishedVMin, vmax = lab1d::kPublishedVMax;
  double constant = -1.0;
  int n_dof = 4096;
  int pairs = 50;
  std::string envelope_pairs = "1,2,3,4,5";
  std::string partial_sums = "1,3,5,10,50";
  std::string out;
};

int run_lab1d(const LabFlags& f) {
  const lab1d::Potential1D V = f.constant >= 0.0 ? lab1d::Potential1D::constant(f.constant, f.pieces)
                                                 : lab1d::Potential1D::seeded(f.seed, f.pieces, f.vmin, f.vmax);
  const lab1d::Solution1D s = lab1d::solve_1d(V, f.n_dof, f.pairs);
  const std::filesystem::path dir = output_dir(f.out);
  std::filesystem::create_directories(dir);
  const std::string stem = f.constant >= 0.0 ? "lab1d_const" : "lab1d_seed" + std::to_string(f.seed);
  auto write = [&](const std::string& what, auto&& body) {
    const auto path = dir / (stem + "." + what + ".dat");
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    body(os);
    std::printf("wrote %s\n", path.string().c_str());
  };
  write("potential", [&](std::ostream& os) { lab1d::write_potential_dat(os, V); });
  write("envelope", [&](std::ostream& os) { lab1d::write_envelope_dat(os, s, parse_ints<int>(f.envelope_pairs)); });
  write("fourier", [&](std::ostream& os) { lab1d::write_fourier_dat(os, s, parse_ints<int>(f.partial_sums)); });

  std::printf("lambda_1 %.10g, lambda_%d %.10g\n", s.lambda[0], f.pairs, s.lambda[f.pairs - 1]);
  std::printf("envelope: max excess %.3e (max u %.6g)\n", lab1d::envelope_check(s), s.u.maxCoeff());
  const lab1d::Census c = lab1d::ground_state_census(s);
  std::printf("landscape peaks: %zu, unmatched %d\n", c.peaks.size(), c.unmatched);
  for (const auto& p : c.peaks)
    std::printf("  x %.5f  u %.6g  -> psi_%d (distance %.4f)\n", p.x_peak, p.u_peak, p.pair, p.distance);
  return kExitTol;
}

}  // namespace

int main(int argc, char** argv) {
  pin_blas_kernel(argv);
  CLI::App app{"hp-adaptive eigenvalue clusters driven by the landscape function"};
  app.require_subcommand(1);

  app.add_subcommand("list", "print the problem catalog");

  RunFlags run_flags;
  CLI::App* run_cmd = app.add_subcommand("run", "one adaptive run; exit 0 on tolerance, 2 otherwise");
  add_run_flags(run_cmd, run_flags, true);

  RunFlags cmp_flags;
  std::string strategies = "LR,CR-sum";
  CLI::App* cmp_cmd = app.add_subcommand("compare", "the same run under several strategies");
  add_run_flags(cmp_cmd, cmp_flags, false);
  cmp_cmd->add_option("--strategies", strategies, "comma-separated strategies")->capture_default_str();

  LabFlags lab;
  CLI::App* lab_cmd = app.add_subcommand("lab1d", "1D landscape laboratory data files");
  lab_cmd->add_option("--seed", lab.seed, "potential seed")->capture_default_str();
  lab_cmd->add_option("--pieces", lab.pieces, "potential subintervals")->capture_default_str();
  lab_cmd->add_option("--vmin", lab.vmin, "smallest potential value")->capture_default_str();
  lab_cmd->add_option("--vmax", lab.vmax, "largest potential value")->capture_default_str();
  lab_cmd->add_option("--constant", lab.constant, "constant potential instead of a seeded one");
  lab_cmd->add_option("--ndof", lab.n_dof, "intervals")->capture_default_str();
  lab_cmd->add_option("--pairs", lab.pairs, "eigenpairs computed")->capture_default_str();
  lab_cmd->add_option("--envelope-pairs", lab.envelope_pairs, "pairs in the envelope file")->capture_default_str();
  lab_cmd->add_option("--partial-sums", lab.partial_sums, "N values in the Fourier file")->capture_default_str();
  lab_cmd->add_option("--out", lab.out, "output directory (default $LANDSCAPE_HP_OUT or ./runs)");

  std::string only;
  std::string accept_out;
  CLI::App* acc_cmd = app.add_subcommand("accept", "run the acceptance experiments");
  acc_cmd->add_option("--only", only, "comma-separated criterion ids (default: all)");
  acc_cmd->add_option("--out", accept_out, "keep the run logs in this directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  CLI::App* active = app.get_subcommands().front();
  try {
    if (active->get_name() == "list") {
      for (const auto& n : catalog_names()) std::printf("%s\n", n.c_str());
      return kExitTol;
    }
    if (active == run_cmd) {
      run_flags.cfg.strategy = parse_strategy(run_flags.strategy);
      return run_one(run_flags.cfg, run_flags).stopped_by_tolerance() ? kExitTol : kExitNoTol;
    }
    if (active == cmp_cmd) {
      bool all_tol = true;
      const auto names = split_list(strategies);
      if (names.empty()) throw std::invalid_argument("--strategies is empty");
      for (const auto& s : names) {
        RunConfig c = cmp_flags.cfg;
        c.strategy = parse_strategy(s);
        all_tol = run_one(c, cmp_flags).stopped_by_tolerance() && all_tol;
      }
      return all_tol ? kExitTol : kExitNoTol;
    }
    if (active == lab_cmd) return run_lab1d(lab);
    if (active == acc_cmd) {
      std::vector<int> ids = parse_ints<int>(only);
      if (ids.empty()) {
        ids.resize(AcceptanceSuite::kCount);
        std::iota(ids.begin(), ids.end(), 1);
      }
      for (int id : ids) AcceptanceSuite::name(id);
      AcceptanceSuite suite(accept_out);
      bool ok = true;
      for (const auto& r : suite.run_all(ids, &std::cout)) ok = ok && r.pass;
      return ok ? kExitTol : kExitError;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n\n%s", e.what(), active->help().c_str());
    return kExitError;
  }
  return kExitError;
}
