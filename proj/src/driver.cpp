#include "lhp/driver.hpp"

#include "lhp/runtime.hpp"
#include "lhp/smoothness.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace lhp {

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::ER: return "ER";
    case Strategy::CRSum: return "CR-sum";
    case Strategy::CRMax: return "CR-max";
    case Strategy::LR: return "LR";
    case Strategy::MR: return "MR";
  }
  return "?";
}

Strategy parse_strategy(const std::string& s) {
  if (s == "ER") return Strategy::ER;
  if (s == "CR-sum" || s == "CR") return Strategy::CRSum;
  if (s == "CR-max") return Strategy::CRMax;
  if (s == "LR" || s == "LR-paused") return Strategy::LR;
  if (s == "MR") return Strategy::MR;
  throw std::invalid_argument("unknown strategy '" + s + "'; expected ER, CR-sum, CR-max, LR, MR or LR-paused");
}

void RunConfig::validate() const {
  auto fail = [](const std::string& m) { throw std::invalid_argument(m); };
  if (!(tol >= 0.0)) fail("tol must be >= 0");
  if (n_max < 1) fail("n_max must be >= 1");
  if (pause < 0) fail("pause must be >= 0");
  if (mr_threshold <= 0) fail("MR threshold must be > 0");
  if (M < 1) fail("M must be >= 1");
  if (strategy == Strategy::ER && j < 1) fail("j must be >= 1");
  if (!(adapt.r > 0.0 && adapt.r <= 100.0)) fail("r must be in (0, 100]");
  if (!(adapt.tol_ana > 0.0 && adapt.tol_ana <= 1.0)) fail("tol_ana must be in (0, 1]");
  if (adapt.p_max < 1 || adapt.p_max > kMaxOrder) fail("p_max must be in [1, " + std::to_string(kMaxOrder) + "]");
  if (!(gamma > 0.0)) fail("gamma must be > 0");
  if ((pause > 0 || picard) && strategy != Strategy::LR && strategy != Strategy::MR)
    fail("pausing and Picard switchover need a landscape strategy (LR or MR)");
  if (picard_threshold < 0) fail("picard threshold must be >= 0");
  if (max_dof < 0) fail("max_dof must be >= 0");
  if (workers < 1) fail("workers must be >= 1");
}

std::string RunConfig::label() const {
  std::string s = to_string(strategy);
  if (pause > 0) s += "-pause" + std::to_string(pause);
  if (picard) s += "-picard" + std::to_string(picard_threshold);
  return s;
}

namespace {

// Picard steps whose envelope falls below this multiple of tol are confirmed
// with a full eigensolve.
constexpr double kConfirmBand = 2.0;

int cluster_size(const RunConfig& cfg) { return cfg.strategy == Strategy::ER ? cfg.j : cfg.M; }

std::string file_stem(const RunConfig& cfg) {
  std::string p = cfg.problem;
  std::replace(p.begin(), p.end(), ':', '-');
  return p + "_" + cfg.label() + "_" + std::to_string(cfg.seed);
}

template <class F>
void write_file(const std::string& path, F&& body) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  body(os);
}

std::string step_name(const std::string& stem, int step, const char* what) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "_step%03d.", step);
  return stem + buf + what;
}

/// Pairs on the current space for the Picard path: frozen pairs are the
/// prolongated ones (rotated by Rayleigh-Ritz within their span), the others
/// are refined by block inverse iteration. Returns false when Picard gave up.
bool picard_step(const Factorization& F, const Eigen::VectorXd& mass, const Eigen::MatrixXd& X,
                 const std::vector<int>& selected, double tol, std::int64_t budget, EigenpairSet* out) {
  const SymmetricMatrix& K = F.matrix();
  const int M = static_cast<int>(X.cols());
  EigenpairSet start;
  start.vectors = X;
  start.values.resize(M);
  start.residuals.resize(M);
  start.converged.assign(M, true);
  for (int c = 0; c < M; ++c) {
    const auto x = start.vectors.col(c);
    start.values[c] = x.dot(K.apply(x)) / x.dot(mass.cwiseProduct(x));
  }
  std::vector<int> frozen;
  for (int c = 0; c < M; ++c)
    if (std::find(selected.begin(), selected.end(), c) == selected.end()) frozen.push_back(c);
  if (!frozen.empty()) {
    Eigen::MatrixXd Q(X.rows(), static_cast<Eigen::Index>(frozen.size()));
    for (std::size_t i = 0; i < frozen.size(); ++i) Q.col(static_cast<Eigen::Index>(i)) = X.col(frozen[i]);
    const Eigen::MatrixXd KQ = K.lower.selfadjointView<Eigen::Lower>() * Q;
    const Eigen::MatrixXd H = 0.5 * (Q.transpose() * KQ + KQ.transpose() * Q);
    const Eigen::MatrixXd G = Q.transpose() * mass.asDiagonal() * Q;
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(H, 0.5 * (G + G.transpose()));
    const Eigen::MatrixXd R = Q * es.eigenvectors();
    for (std::size_t i = 0; i < frozen.size(); ++i) {
      start.vectors.col(frozen[i]) = R.col(static_cast<Eigen::Index>(i));
      start.values[frozen[i]] = es.eigenvalues()[static_cast<Eigen::Index>(i)];
    }
  }
  start.residuals.setConstant(NAN);  // frozen pairs are not re-measured
  for (int c : selected) start.converged[c] = false;
  if (selected.empty()) {
    *out = std::move(start);
    return true;
  }
  PicardOptions po;
  po.tol = tol;
  const std::int64_t per_iter = static_cast<std::int64_t>(selected.size());
  po.max_iterations = static_cast<int>(std::clamp<std::int64_t>(budget / std::max<std::int64_t>(per_iter, 1), 1, 200));
  PicardReport rep;
  EigenpairSet res = picard_refine(F, mass, start, selected, po, &rep);
  double worst = 0.0;
  for (int c : selected) worst = std::max(worst, res.residuals[c]);
  *out = std::move(res);
  out->backsolves = rep.backsolves;
  const bool ok = !rep.stagnated || worst <= 1e3 * tol;
  return ok && out->all_converged();
}

struct Thresholds {
  double eta_max_rel = 0.0, eta_max_abs = 0.0;
  std::vector<bool> converged;  // estimator-based, per pair
  int unconverged = 0;
};

Thresholds evaluate(const RunConfig& cfg, const Eigen::VectorXd& lambda, const std::vector<IndicatorField>& eta) {
  Thresholds t;
  const int M = static_cast<int>(eta.size());
  t.converged.assign(M, false);
  for (int c = 0; c < M; ++c) {
    const double abs = eta[c].total();
    const double rel = abs / lambda[c];
    t.eta_max_rel = std::max(t.eta_max_rel, rel);
    t.eta_max_abs = std::max(t.eta_max_abs, abs);
    t.converged[c] = (cfg.absolute_tol ? abs : rel) < cfg.tol;
    if (!t.converged[c]) ++t.unconverged;
  }
  return t;
}

bool stop_now(const RunConfig& cfg, const Thresholds& t, const std::vector<IndicatorField>& eta,
              const Eigen::VectorXd& lambda) {
  if (cfg.strategy == Strategy::ER) {
    const double a = eta[cfg.j - 1].total();
    return (cfg.absolute_tol ? a : a / lambda[cfg.j - 1]) < cfg.tol;
  }
  return (cfg.absolute_tol ? t.eta_max_abs : t.eta_max_rel) < cfg.tol;
}

RunLog adaptive_loop(const RunConfig& cfg, RunState* state, const RunOutputs& out) {
  cfg.validate();
  const double cpu_start = process_cpu_seconds();
  CatalogEntry entry = catalog(cfg.problem, cfg.seed);
  entry.spec.gamma = cfg.gamma;
  entry.spec.source = source_by_name(cfg.source);
  const ProblemSpec& spec = entry.spec;
  Mesh mesh = entry.mesh;
  const int M = cluster_size(cfg);

  std::string stem;
  const bool dumps = !out.dir.empty() && out.dump_meshes;
  if (!out.dir.empty()) {
    std::filesystem::create_directories(out.dir);
    stem = (std::filesystem::path(out.dir) / file_stem(cfg)).string();
    if (dumps) write_file(stem + ".problem.json", [&](std::ostream& os) { write_problem_json(os, spec); });
  }

  RunLog log;
  log.cfg = cfg;
  CpuStopwatch eig_clock, land_clock;

  // Pairs from the last eigensolver-active step and their estimator flags.
  Mesh prev_mesh;
  DofMap prev_dofs;
  Eigen::MatrixXd prev_vectors;
  std::vector<bool> prev_converged;
  std::vector<double> prev_rel;
  bool picard_mode = false;
  std::int64_t last_full_solves = std::numeric_limits<std::int64_t>::max();
  Mesh solved_mesh;
  DiscreteField last_u;
  IndicatorField last_eta_land;
  EigenpairSet last_pairs;
  std::vector<IndicatorField> last_eta_eig;

  for (int step = 1; step <= cfg.n_max; ++step) {
    const double wall0 = wall_seconds();
    const double cpu0 = process_cpu_seconds();
    const double eig0 = eig_clock.total();
    const double land0 = land_clock.total();

    StepRecord rec;
    rec.step = step;
    const DofMap dofs = DofMap::build(mesh);
    rec.dof = dofs.dim();
    rec.elements = dofs.num_elements();
    rec.max_order = *std::max_element(dofs.order.begin(), dofs.order.end());

    land_clock.start();
    const SymmetricMatrix K = assemble_stiffness(mesh, spec);
    const Eigen::VectorXd mass = assemble_mass(mesh);
    const Factorization F(K);
    DiscreteField u{dofs, solve_landscape(F, assemble_source(mesh, spec.source))};
    land_clock.stop();
    const IndicatorField eta_land = eta_landscape(mesh, spec, u);
    rec.eta_land2 = eta_land.total();
    solved_mesh = mesh;
    last_u = u;
    last_eta_land = eta_land;

    const bool active = (step - 1) % (cfg.pause + 1) == 0;
    rec.eigen_called = active;
    std::vector<IndicatorField> eta_eig;
    EigenpairSet pairs;
    bool stop = false;
    if (active) {
      if (M > dofs.dim() / 2) throw std::runtime_error("cluster size exceeds half the space dimension");
      const std::int64_t solves0 = F.backsolves();
      bool have = false;
      std::vector<int> selected;
      Eigen::MatrixXd X;
      eig_clock.start();
      if (picard_mode && prev_vectors.cols() == M) {
        X = prolongate(prev_mesh, prev_dofs, prev_vectors, mesh);
        double loosest = INFINITY;
        for (int c = 0; c < M; ++c)
          if (!prev_converged[c]) {
            selected.push_back(c);
            loosest = std::min(loosest, prev_rel[c]);
          }
        // Algebraic accuracy balanced against the discretization error seen
        // on the previous eigensolver step.
        const double tol_alg = std::max(cfg.picard_tol, cfg.picard_rel * std::sqrt(loosest));
        have = picard_step(F, mass, X, selected, tol_alg, last_full_solves, &pairs);
        rec.picard_used = true;
      }
      auto full_solve = [&] {
        LanczosOptions lo;
        lo.tol = cfg.lanczos_tol;
        lo.seed = cfg.seed * 1000003ULL + static_cast<std::uint64_t>(step);
        const std::int64_t s0 = F.backsolves();
        pairs = lowest_eigenpairs(F, mass, M, lo);
        last_full_solves = F.backsolves() - s0;
      };
      if (!have) full_solve();
      eig_clock.stop();

      eta_eig = eta_eigenpairs(mesh, spec, pairs.values, pairs.vectors);
      Thresholds th = evaluate(cfg, pairs.values, eta_eig);
      stop = stop_now(cfg, th, eta_eig, pairs.values);

      // Picard pairs are only accurate to the balanced tolerance. Near the
      // stopping threshold the decision is confirmed with a full solve, so a
      // run never terminates on, or steps past, inexact pairs.
      if (have && rec.picard_used && (cfg.absolute_tol ? th.eta_max_abs : th.eta_max_rel) < kConfirmBand * cfg.tol) {
        eig_clock.start();
        full_solve();
        eig_clock.stop();
        eta_eig = eta_eigenpairs(mesh, spec, pairs.values, pairs.vectors);
        th = evaluate(cfg, pairs.values, eta_eig);
        stop = stop_now(cfg, th, eta_eig, pairs.values);
      }
      rec.backsolves = F.backsolves() - solves0;
      ++log.eigen_calls;

      rec.lambda.assign(pairs.values.data(), pairs.values.data() + M);
      for (const auto& e : eta_eig) rec.eta_eig2.push_back(e.total());
      rec.eta_max_rel = th.eta_max_rel;
      rec.eta_max_abs = th.eta_max_abs;
      rec.unconverged = th.unconverged;
      rec.rel_err.assign(M, NAN);
      double emax = NAN;
      for (int c = 0; c < M; ++c)
        if (auto ex = entry.reference.at(c + 1)) {
          rec.rel_err[c] = std::abs(*ex - pairs.values[c]) / *ex;
          emax = std::isnan(emax) ? rec.rel_err[c] : std::max(emax, rec.rel_err[c]);
        }
      rec.e_max_rel = emax;

      prev_mesh = mesh;
      prev_dofs = dofs;
      prev_vectors = pairs.vectors;
      prev_converged = th.converged;
      prev_rel.resize(M);
      for (int c = 0; c < M; ++c) prev_rel[c] = eta_eig[c].total() / pairs.values[c];
      last_pairs = pairs;
      last_eta_eig = eta_eig;
      picard_mode = cfg.picard && th.unconverged <= cfg.picard_threshold;
    }

    if (dumps) {
      write_file(step_name(stem, step, "mesh"), [&](std::ostream& os) { write_mesh_dump(os, mesh); });
      const std::vector<double> reg = regularity_field(u);
      write_file(step_name(stem, step, "landscape.ind"),
                 [&](std::ostream& os) { write_indicator_dump(os, eta_land, &reg); });
      if (!eta_eig.empty()) {
        IndicatorField mx{"eigmax", std::vector<double>(eta_land.eta2.size(), 0.0)};
        for (const auto& e : eta_eig)
          for (std::size_t k = 0; k < e.eta2.size(); ++k) mx.eta2[k] = std::max(mx.eta2[k], e.eta2[k]);
        write_file(step_name(stem, step, "eigmax.ind"), [&](std::ostream& os) { write_indicator_dump(os, mx); });
      }
    }

    auto finish_step = [&] {
      if (cfg.record_timings) {
        rec.wall_seconds = wall_seconds() - wall0;
        rec.cpu_seconds = process_cpu_seconds() - cpu0;
        rec.cpu_eigen_seconds = eig_clock.total() - eig0;
        rec.cpu_landscape_seconds = land_clock.total() - land0;
      }
      log.steps.push_back(std::move(rec));
    };

    if (stop || step == cfg.n_max) {
      log.terminal = stop ? "tol" : "max-steps";
      finish_step();
      break;
    }

    // Plan on the current space.
    Strategy planner = cfg.strategy;
    if (planner == Strategy::MR) planner = rec.dof > cfg.mr_threshold ? Strategy::CRSum : Strategy::LR;
    RefinementPlan plan;
    switch (planner) {
      case Strategy::ER: {
        DiscreteField phi{dofs, pairs.vectors.col(cfg.j - 1)};
        plan = plan_single_eig(eta_eig[cfg.j - 1], phi, cfg.adapt);
        break;
      }
      case Strategy::CRSum:
        if (!active) throw std::logic_error("cluster planning needs eigenpairs on every step");
        plan = plan_cluster_sum(eta_eig, dofs, pairs.vectors, cfg.adapt);
        break;
      case Strategy::CRMax:
        plan = plan_cluster_max(eta_eig, dofs, pairs.vectors, cfg.adapt);
        break;
      default:
        plan = plan_landscape(eta_land, u, cfg.adapt);
        break;
    }
    if (cfg.adapt.h_only) {
      plan.h_set.insert(plan.h_set.end(), plan.p_set.begin(), plan.p_set.end());
      plan.p_set.clear();
      std::sort(plan.h_set.begin(), plan.h_set.end());
    }
    rec.plan_strategy = to_string(planner);
    if (dumps) write_file(step_name(stem, step, "plan"), [&](std::ostream& os) { write_plan_dump(os, plan); });

    AdaptReport rep;
    Mesh next = enforce_local_properties(plan, mesh, cfg.adapt, &rep);
    if (static_cast<std::int64_t>(DofMap::build(next).dim()) <= rec.dof) {
      // Every p-marked element sits at p_max: split those instead.
      RefinementPlan alt{plan.h_set, {}};
      alt.h_set.insert(alt.h_set.end(), plan.p_set.begin(), plan.p_set.end());
      std::sort(alt.h_set.begin(), alt.h_set.end());
      plan = alt;
      next = enforce_local_properties(plan, mesh, cfg.adapt, &rep);
    }
    rec.h_marked = static_cast<int>(plan.h_set.size());
    rec.p_marked = static_cast<int>(plan.p_set.size());
    finish_step();
    mesh = std::move(next);
    if (cfg.max_dof > 0 && DofMap::build(mesh).dim() > cfg.max_dof) {
      log.terminal = "max-dof";
      break;
    }
  }

  if (state) {
    state->problem = entry;
    state->mesh = solved_mesh;
    state->landscape = last_u;
    state->eta_land = last_eta_land;
    state->pairs = last_pairs;
    state->pairs_mesh = prev_mesh;
    state->eta_eig = last_eta_eig;
  }
  log.total_cpu_eigen = cfg.record_timings ? eig_clock.total() : 0.0;
  log.total_cpu_landscape = cfg.record_timings ? land_clock.total() : 0.0;
  log.total_cpu = cfg.record_timings ? process_cpu_seconds() - cpu_start : 0.0;
  if (!out.dir.empty()) write_logs(out.dir, log);
  return log;
}

}  // namespace

RunLog run_single(const RunConfig& cfg, RunState* state, const RunOutputs& out) {
  if (cfg.strategy != Strategy::ER) throw std::invalid_argument("run_single needs strategy ER");
  return adaptive_loop(cfg, state, out);
}

RunLog run_cluster(const RunConfig& cfg, RunState* state, const RunOutputs& out) {
  if (cfg.strategy != Strategy::CRSum && cfg.strategy != Strategy::CRMax)
    throw std::invalid_argument("run_cluster needs strategy CR-sum or CR-max");
  return adaptive_loop(cfg, state, out);
}

RunLog run_landscape(const RunConfig& cfg, RunState* state, const RunOutputs& out) {
  if (cfg.strategy != Strategy::LR && cfg.strategy != Strategy::MR)
    throw std::invalid_argument("run_landscape needs strategy LR or MR");
  if (cfg.pause != 0 || cfg.picard) throw std::invalid_argument("run_landscape does not pause; use run_landscape_paused");
  return adaptive_loop(cfg, state, out);
}

RunLog run_landscape_paused(const RunConfig& cfg, RunState* state, const RunOutputs& out) {
  if (cfg.strategy != Strategy::LR && cfg.strategy != Strategy::MR)
    throw std::invalid_argument("run_landscape_paused needs strategy LR or MR");
  return adaptive_loop(cfg, state, out);
}

RunLog run(const RunConfig& cfg, RunState* state, const RunOutputs& out) {
  switch (cfg.strategy) {
    case Strategy::ER: return run_single(cfg, state, out);
    case Strategy::CRSum:
    case Strategy::CRMax: return run_cluster(cfg, state, out);
    default:
      return (cfg.pause > 0 || cfg.picard) ? run_landscape_paused(cfg, state, out) : run_landscape(cfg, state, out);
  }
}

std::vector<MetricsRow> metrics(const RunLog& log, const ReferenceData* exact) {
  std::vector<MetricsRow> rows;
  for (const auto& s : log.steps) {
    MetricsRow r{s.step, s.dof, s.eta_eig2, {}, NAN, NAN, s.cpu_seconds};
    double emax = NAN;
    for (std::size_t c = 0; c < s.lambda.size(); ++c) {
      r.rel_bound.push_back(s.eta_eig2[c] / s.lambda[c]);
      r.eta_max_rel = std::isnan(r.eta_max_rel) ? r.rel_bound.back() : std::max(r.eta_max_rel, r.rel_bound.back());
      if (exact)
        if (auto ex = exact->at(static_cast<int>(c) + 1)) {
          const double e = std::abs(*ex - s.lambda[c]) / *ex;
          emax = std::isnan(emax) ? e : std::max(emax, e);
        }
    }
    r.e_max_rel = emax;
    rows.push_back(std::move(r));
  }
  return rows;
}

namespace {

nlohmann::ordered_json num(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

nlohmann::ordered_json num_array(const std::vector<double>& v) {
  auto a = nlohmann::ordered_json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_jsonl(std::ostream& os, const RunLog& log) {
  using nlohmann::ordered_json;
  const RunConfig& c = log.cfg;
  for (const auto& s : log.steps) {
    ordered_json j;
    j["type"] = "step";
    j["step"] = s.step;
    j["dof"] = s.dof;
    j["elements"] = s.elements;
    j["max_order"] = s.max_order;
    j["eta_land2"] = s.eta_land2;
    j["eigen_called"] = s.eigen_called;
    j["picard_used"] = s.picard_used;
    j["lambda"] = num_array(s.lambda);
    j["eta_eig2"] = num_array(s.eta_eig2);
    j["rel_err"] = num_array(s.rel_err);
    j["eta_max_rel"] = num(s.eta_max_rel);
    j["eta_max_abs"] = num(s.eta_max_abs);
    j["e_max_rel"] = num(s.e_max_rel);
    j["unconverged"] = s.unconverged;
    j["backsolves"] = s.backsolves;
    j["h_marked"] = s.h_marked;
    j["p_marked"] = s.p_marked;
    j["plan"] = s.plan_strategy;
    j["wall_seconds"] = s.wall_seconds;
    j["cpu_seconds"] = s.cpu_seconds;
    j["cpu_eigen_seconds"] = s.cpu_eigen_seconds;
    j["cpu_landscape_seconds"] = s.cpu_landscape_seconds;
    os << j.dump() << '\n';
  }
  ordered_json sum;
  sum["type"] = "summary";
  sum["problem"] = c.problem;
  sum["strategy"] = to_string(c.strategy);
  sum["label"] = c.label();
  sum["M"] = cluster_size(c);
  sum["j"] = c.j;
  sum["tol"] = c.tol;
  sum["absolute_tol"] = c.absolute_tol;
  sum["n_max"] = c.n_max;
  sum["r"] = c.adapt.r;
  sum["tol_ana"] = c.adapt.tol_ana;
  sum["gamma"] = c.gamma;
  sum["seed"] = c.seed;
  sum["source"] = c.source;
  sum["pause"] = c.pause;
  sum["picard"] = c.picard;
  sum["picard_threshold"] = c.picard_threshold;
  sum["mr_threshold"] = c.mr_threshold;
  sum["terminal"] = log.terminal;
  sum["steps"] = log.steps.size();
  sum["eigen_calls"] = log.eigen_calls;
  sum["total_cpu_eigen"] = log.total_cpu_eigen;
  sum["total_cpu_landscape"] = log.total_cpu_landscape;
  sum["total_cpu"] = log.total_cpu;
  os << sum.dump() << '\n';
}

void write_csv(std::ostream& os, const RunLog& log) {
  const int M = cluster_size(log.cfg);
  os << "step,dof,eta_land2,eta_max_rel,eta_max_abs,e_max_rel,elements,max_order,eigen_called,picard_used,"
        "unconverged,backsolves,h_marked,p_marked,plan";
  for (int c = 1; c <= M; ++c) os << ",lambda_" << c;
  for (int c = 1; c <= M; ++c) os << ",eta2_" << c;
  for (int c = 1; c <= M; ++c) os << ",relerr_" << c;
  os << ",wall_seconds,cpu_eigen_seconds,cpu_landscape_seconds,cpu_seconds\n";
  for (const auto& s : log.steps) {
    os << s.step << ',' << s.dof << ',' << fmt(s.eta_land2) << ',' << fmt(s.eta_max_rel) << ',' << fmt(s.eta_max_abs)
       << ',' << fmt(s.e_max_rel) << ',' << s.elements << ',' << s.max_order << ',' << (s.eigen_called ? 1 : 0) << ','
       << (s.picard_used ? 1 : 0) << ',';
    if (s.eigen_called) os << s.unconverged;
    os << ',' << s.backsolves << ',' << s.h_marked << ',' << s.p_marked << ',' << s.plan_strategy;
    auto col = [&](const std::vector<double>& v, int c) { os << ',' << (c < static_cast<int>(v.size()) ? fmt(v[c]) : ""); };
    for (int c = 0; c < M; ++c) col(s.lambda, c);
    for (int c = 0; c < M; ++c) col(s.eta_eig2, c);
    for (int c = 0; c < M; ++c) col(s.rel_err, c);
    os << ',' << fmt(s.wall_seconds) << ',' << fmt(s.cpu_eigen_seconds) << ',' << fmt(s.cpu_landscape_seconds) << ','
       << fmt(s.cpu_seconds) << '\n';
  }
}

std::string write_logs(const std::string& dir, const RunLog& log) {
  std::filesystem::create_directories(dir);
  const std::string stem = (std::filesystem::path(dir) / file_stem(log.cfg)).string();
  write_file(stem + ".jsonl", [&](std::ostream& os) { write_jsonl(os, log); });
  write_file(stem + ".csv", [&](std::ostream& os) { write_csv(os, log); });
  return stem;
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_line needs two or more points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) sx += x[i], sy += y[i];
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_line: x values are all equal");
  const double b = sxy / sxx;
  const double r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return {b, my - b * mx, r2};
}

}  // namespace lhp
