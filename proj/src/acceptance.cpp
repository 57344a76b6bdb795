#include "lhp/acceptance.hpp"

#include "lhp/lab1d.hpp"
#include "lhp/runtime.hpp"
#include "lhp/smoothness.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace lhp {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string config_key(const RunConfig& c) {
  return fmt("%s|%s|M%d|j%d|tol%.17g|abs%d|n%d|dof%lld|r%g|ta%g|pm%d|mj%d|ho%d|g%g|s%llu|%s|l%d|pc%d|pt%d|mr%lld",
             c.problem.c_str(), to_string(c.strategy).c_str(), c.M, c.j, c.tol, c.absolute_tol ? 1 : 0, c.n_max,
             static_cast<long long>(c.max_dof), c.adapt.r, c.adapt.tol_ana, c.adapt.p_max, c.adapt.max_order_jump,
             c.adapt.h_only ? 1 : 0, c.gamma, static_cast<unsigned long long>(c.seed), c.source.c_str(), c.pause,
             c.picard ? 1 : 0, c.picard_threshold, static_cast<long long>(c.mr_threshold));
}

RunConfig base(const std::string& problem, Strategy s, int M, double tol) {
  RunConfig c;
  c.problem = problem;
  c.strategy = s;
  c.M = M;
  c.tol = tol;
  c.n_max = 200;
  return c;
}

const StepRecord& last_active(const RunLog& log) {
  for (auto it = log.steps.rbegin(); it != log.steps.rend(); ++it)
    if (it->eigen_called) return *it;
  throw std::logic_error("run without eigensolver steps");
}

/// Steps in the second half of the run (by step count) that called the eigensolver.
std::vector<const StepRecord*> final_half(const RunLog& log) {
  std::vector<const StepRecord*> out;
  const std::size_t n = log.steps.size();
  for (std::size_t i = n / 2; i < n; ++i)
    if (log.steps[i].eigen_called) out.push_back(&log.steps[i]);
  return out;
}

double max_rel_err(const StepRecord& s) {
  double m = 0.0;
  for (double e : s.rel_err) m = std::max(m, std::isnan(e) ? INFINITY : e);
  return m;
}

double max_regularity(const DiscreteField& f) {
  const auto r = regularity_field(f);
  return *std::max_element(r.begin(), r.end());
}

DiscreteField column(const DofMap& dofs, const Eigen::MatrixXd& V, int j) { return {dofs, V.col(j)}; }

std::int64_t first_dof_below(const RunLog& log, double tol) {
  for (const auto& s : log.steps)
    if (s.eigen_called && s.eta_max_rel < tol) return s.dof;
  return -1;
}

Mesh uniform_refinement(const Mesh& m) {
  std::vector<int> all(m.num_leaves());
  for (std::size_t k = 0; k < all.size(); ++k) all[k] = static_cast<int>(k);
  return refine_elements(m, all);
}

struct Verdict {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [FAIL]");
  }
};

// ---------------------------------------------------------------------------

Verdict unit_square_oracle(AcceptanceSuite& s) {
  Verdict v;
  const auto& r = s.adaptive(base("unit_square", Strategy::LR, 20, 1e-6));
  const StepRecord& last = last_active(r.log);
  v.check(r.log.stopped_by_tolerance(), fmt("terminal %s at step %d, %lld DOF", r.log.terminal.c_str(), last.step,
                                            static_cast<long long>(last.dof)));
  const double e = max_rel_err(last);
  v.check(e < 1e-5, fmt("max relative eigenvalue error %.2e over 20 pairs", e));
  return v;
}

Verdict lshape_references(AcceptanceSuite& s) {
  Verdict v;
  for (Strategy st : {Strategy::CRSum, Strategy::LR}) {
    RunConfig c = base("lshape", st, 5, 1e-6);
    c.max_dof = 150000;
    const auto& r = s.adaptive(c);
    const StepRecord& last = last_active(r.log);
    const double e = max_rel_err(last);
    v.check(e <= 1e-5, fmt("%s: error %.2e at %lld DOF", to_string(st).c_str(), e, static_cast<long long>(last.dof)));
  }

  RunConfig c = base("lshape", Strategy::LR, 5, 0.0);
  c.adapt.p_max = 2;
  c.adapt.h_only = true;
  c.max_dof = 100000;
  const auto& r = s.adaptive(c);
  const double lam1 = *r.state.problem.reference.at(1);
  std::vector<double> x, y;
  for (const StepRecord* st : final_half(r.log)) {
    x.push_back(std::log(static_cast<double>(st->dof)));
    y.push_back(std::log(std::abs(st->lambda[0] - lam1)));
  }
  const LinearFit f = fit_line(x, y);
  v.check(f.slope >= -2.6 && f.slope <= -1.5,
          fmt("fixed p=2 h-only slope %.3f (R^2 %.3f, %zu steps)", f.slope, f.r2, x.size()));
  return v;
}

Verdict lr_competitiveness(AcceptanceSuite& s) {
  Verdict v;
  const auto& lr = s.adaptive(base("lshape", Strategy::LR, 20, 1e-6));
  const auto& cr = s.adaptive(base("lshape", Strategy::CRSum, 20, 1e-3));
  const std::int64_t a = first_dof_below(lr.log, 1e-3), b = first_dof_below(cr.log, 1e-3);
  v.check(a > 0 && b > 0, fmt("first DOF below 1e-3: LR %lld, CR-sum %lld", static_cast<long long>(a),
                              static_cast<long long>(b)));
  if (a > 0 && b > 0) {
    const double ratio = static_cast<double>(a) / static_cast<double>(b);
    v.check(ratio >= 1.0 / 3.0 && ratio <= 3.0, fmt("ratio %.3f", ratio));
  }
  return v;
}

Verdict exponential_convergence(AcceptanceSuite& s) {
  Verdict v;
  for (const char* problem : {"unit_square", "lshape"}) {
    const auto& r = s.adaptive(base(problem, Strategy::LR, 20, 1e-6));
    std::vector<double> x, y;
    for (const StepRecord* st : final_half(r.log)) {
      x.push_back(std::sqrt(static_cast<double>(st->dof)));
      y.push_back(std::log(st->eta_max_rel));
    }
    const LinearFit f = fit_line(x, y);
    v.check(f.r2 >= 0.9 && f.slope < 0.0, fmt("%s: slope %.4f per sqrt(DOF), R^2 %.3f over %zu steps", problem,
                                               f.slope, f.r2, x.size()));
  }
  return v;
}

Verdict envelope_inequality(AcceptanceSuite&) {
  Verdict v;
  double worst = -INFINITY;
  int violations = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto V = lab1d::Potential1D::seeded(seed, 32, lab1d::kPublishedVMin, lab1d::kPublishedVMax);
    const auto sol = lab1d::solve_1d(V, 4096, 50);
    const double rel = lab1d::envelope_check(sol) / sol.u.maxCoeff();
    worst = std::max(worst, rel);
    if (rel > 1e-3) ++violations;
  }
  v.check(violations == 0, fmt("10 seeded potentials: %d violations, worst excess %.2e of max u", violations, worst));

  const auto free = lab1d::solve_1d(lab1d::Potential1D::constant(0.0), 4096, 1);
  // Nodally exact in exact arithmetic; the allowance covers round-off of a
  // system with condition number of order n^2.
  const int mid = 2048;
  const double ratio = std::abs(free.psi(mid, 0)) / (free.lambda[0] * free.psi.col(0).cwiseAbs().maxCoeff());
  const bool ok = std::abs(ratio - 1.0 / (kPi * kPi)) < 1e-6 && std::abs(free.u[mid] - 0.125) < 1e-10 &&
                  ratio <= free.u[mid];
  v.check(ok, fmt("V=0 at x=1/2: %.8f <= u = %.15f", ratio, free.u[mid]));
  return v;
}

Verdict fourier_expansion(AcceptanceSuite&) {
  Verdict v;
  const auto sol = lab1d::solve_1d(lab1d::Potential1D::constant(0.0), 4096, 50);
  const auto f = lab1d::fourier_reconstruct(sol, 9);
  double worst = 0.0;
  for (int n = 1; n <= 9; ++n) {
    // Orient psi_n like sqrt(2) sin(n pi x).
    const double sign = sol.psi(1, n - 1) > 0.0 ? 1.0 : -1.0;
    worst = std::max(worst, std::abs(sign * f.c[n - 1] - lab1d::fourier_coefficient_free(n)));
  }
  v.check(worst < 1e-6, fmt("max |c_n - 2 sqrt2/(n pi)^3| over n <= 9: %.2e", worst));
  double prev = INFINITY;
  bool monotone = true;
  double rel50 = 0.0;
  for (int N = 0; N <= 50; ++N) {
    const auto r = lab1d::fourier_reconstruct(sol, N);
    monotone = monotone && r.l2_error <= prev * (1.0 + 1e-12);
    prev = r.l2_error;
    rel50 = r.l2_error / r.l2_norm_u;
  }
  v.check(monotone, "error non-increasing for N = 0..50");
  v.check(rel50 < 1e-4, fmt("N = 50 relative error %.2e", rel50));
  return v;
}

Verdict estimator_reliability(AcceptanceSuite&) {
  Verdict v;
  const CatalogEntry e = catalog("unit_square", 1);
  const ProblemSpec& spec = e.spec;

  Mesh ref_mesh = e.mesh;
  for (int i = 0; i < 3; ++i) ref_mesh = uniform_refinement(ref_mesh);
  for (std::size_t k = 0; k < ref_mesh.num_leaves(); ++k) ref_mesh.set_order(static_cast<int>(k), 4);
  const Factorization Fr(assemble_stiffness(ref_mesh, spec));
  const DiscreteField ref{DofMap::build(ref_mesh), solve_landscape(Fr, assemble_source(ref_mesh, spec.source))};

  const double lam1 = 2.0 * kPi * kPi;
  std::vector<double> eff_land, eff_eig;
  Mesh mesh = e.mesh;
  std::string levels;
  for (int level = 0; level < 3; ++level) {
    const DofMap dofs = DofMap::build(mesh);
    const Factorization F(assemble_stiffness(mesh, spec));
    const DiscreteField u{dofs, solve_landscape(F, assemble_source(mesh, spec.source))};
    const double eta = std::sqrt(eta_landscape(mesh, spec, u).total());
    const double err = dg_error(mesh, u, ref_mesh, ref, spec);
    const EigenpairSet pairs = lowest_eigenpairs(F, assemble_mass(mesh), 4);
    const double eta_eig = eta_eigenpair(mesh, spec, pairs.values[0], column(dofs, pairs.vectors, 0)).total();
    eff_land.push_back(eta / err);
    eff_eig.push_back(eta_eig / std::abs(pairs.values[0] - lam1));
    levels += fmt(" %d:(%.3g, %.3g)", dofs.dim(), eff_land.back(), eff_eig.back());
    if (level < 2) mesh = uniform_refinement(mesh);
  }
  auto spread = [](const std::vector<double>& x) {
    return *std::max_element(x.begin(), x.end()) / *std::min_element(x.begin(), x.end());
  };
  v.check(spread(eff_land) <= 5.0, fmt("landscape effectivity spread %.3f", spread(eff_land)));
  v.check(spread(eff_eig) <= 5.0, fmt("eigenvalue effectivity spread %.3f;%s", spread(eff_eig), levels.c_str()));
  return v;
}

Verdict kellogg_ordering(AcceptanceSuite& s) {
  Verdict v;
  RunConfig c = base("disc_diffusion", Strategy::LR, 50, 0.0);
  c.n_max = 10;
  const auto& r = s.adaptive(c);
  const Mesh& mesh = r.state.pairs_mesh;
  const DofMap dofs = DofMap::build(mesh);
  const std::vector<double> m1 = regularity_field(column(dofs, r.state.pairs.vectors, 0));

  std::vector<int> centre;
  const double d = 1e-9;
  for (double x : {0.5 - d, 0.5 + d})
    for (double y : {0.5 - d, 0.5 + d}) centre.push_back(locate_leaf(mesh, x, y));
  double centre_min = INFINITY, other_max = -INFINITY;
  for (std::size_t k = 0; k < m1.size(); ++k) {
    const bool in = std::find(centre.begin(), centre.end(), static_cast<int>(k)) != centre.end();
    if (in)
      centre_min = std::min(centre_min, m1[k]);
    else
      other_max = std::max(other_max, m1[k]);
  }
  v.check(centre_min >= other_max,
          fmt("psi_1 after %zu steps: smallest centre measure %.3f vs largest elsewhere %.3f", r.log.steps.size(),
              centre_min, other_max));

  const double land = max_regularity(r.state.landscape);
  double best = -INFINITY;
  int best_j = 0;
  for (int j = 0; j < r.state.pairs.size(); ++j) {
    const double mj = max_regularity(column(dofs, r.state.pairs.vectors, j));
    if (mj > best) best = mj, best_j = j + 1;
  }
  v.check(best > land, fmt("landscape max measure %.3f, largest eigenvector max %.3f (psi_%d)", land, best, best_j));

  constexpr std::int64_t kBudget = 10000;
  auto budget_run = [&](const char* problem, const char* source) {
    RunConfig b = base(problem, Strategy::LR, 50, 0.0);
    b.max_dof = kBudget;
    b.source = source;
    const StepRecord& last = last_active(s.adaptive(b).log);
    return std::pair{last.eta_max_rel, last.dof};
  };
  const auto [orig, d0] = budget_run("disc_diffusion", "one");
  const auto [moved, d1] = budget_run("disc_diffusion_corner34", "one");
  const auto [lin, d2] = budget_run("disc_diffusion", "1-3x");
  v.check(moved < orig && lin < orig,
          fmt("final bound at <= %lld DOF: f=1 %.3e (%lld), corner34 %.3e (%lld), f=1-3x %.3e (%lld)",
              static_cast<long long>(kBudget), orig, static_cast<long long>(d0), moved, static_cast<long long>(d1),
              lin, static_cast<long long>(d2)));
  return v;
}

Verdict perforated_domain(AcceptanceSuite& s) {
  Verdict v;
  RunConfig c = base("perforated:3", Strategy::LR, 50, 1e-5);
  c.max_dof = 150000;
  const auto& r = s.adaptive(c);
  const double exact = *r.state.problem.reference.at(41);
  std::int64_t hit = -1;
  for (const auto& st : r.log.steps)
    if (st.eigen_called && hit < 0 && st.rel_err[40] < 1e-3) hit = st.dof;
  const StepRecord& last = last_active(r.log);
  v.check(hit > 0 && hit <= 150000, fmt("lambda_41 within 1e-3 of %.5f from %lld DOF; final error %.2e at %lld DOF",
                                        exact, static_cast<long long>(hit), last.rel_err[40],
                                        static_cast<long long>(last.dof)));

  const DofMap dofs = DofMap::build(r.state.pairs_mesh);
  std::vector<double> mx(r.state.pairs.size());
  for (int j = 0; j < r.state.pairs.size(); ++j) mx[j] = max_regularity(column(dofs, r.state.pairs.vectors, j));
  const auto it = std::min_element(mx.begin(), mx.end());
  const int argmin = static_cast<int>(it - mx.begin()) + 1;
  v.check(argmin == 41, fmt("smallest max-element measure %.3f at psi_%d (psi_41: %.3f)", *it, argmin, mx[40]));
  return v;
}

RunConfig rough(int pause, bool picard) {
  RunConfig c = base("schrodinger_rough", Strategy::LR, 20, 1e-4);
  c.pause = pause;
  c.picard = picard;
  return c;
}

Verdict pausing(AcceptanceSuite& s) {
  Verdict v;
  const RunLog& ref = s.adaptive(rough(0, false)).log;
  v.check(ref.stopped_by_tolerance(), fmt("l=0: %zu steps, eigensolver CPU %.2f s", ref.steps.size(), ref.total_cpu_eigen));
  for (int l = 1; l <= 5; ++l) {
    const RunLog& log = s.adaptive(rough(l, false)).log;
    const int n = static_cast<int>(log.steps.size());
    const double final_bound = last_active(log).eta_max_rel;
    const double reduction = 1.0 - log.total_cpu_eigen / ref.total_cpu_eigen;
    const int expected = 1 + (n - 1) / (l + 1);
    v.check(log.stopped_by_tolerance() && final_bound < 1e-4 && reduction >= 0.3 && log.eigen_calls == expected,
            fmt("l=%d: bound %.2e, %d calls (expect %d) in %d steps, CPU reduction %.0f%%", l, final_bound,
                log.eigen_calls, expected, n, 100.0 * reduction));
  }
  return v;
}

Verdict picard_switchover(AcceptanceSuite& s) {
  Verdict v;
  for (int l : {0, 1}) {
    const RunLog& plain = s.adaptive(rough(l, false)).log;
    const RunLog& pic = s.adaptive(rough(l, true)).log;
    const StepRecord& a = last_active(plain);
    const StepRecord& b = last_active(pic);
    double dl = 0.0;
    for (std::size_t c = 0; c < a.lambda.size(); ++c) dl = std::max(dl, std::abs(a.lambda[c] - b.lambda[c]) / a.lambda[c]);
    const bool same_set = plain.stopped_by_tolerance() && pic.stopped_by_tolerance() && a.unconverged == 0 &&
                          b.unconverged == 0 && a.dof == b.dof && dl <= 1e-8;
    v.check(pic.total_cpu_eigen <= plain.total_cpu_eigen && same_set,
            fmt("l=%d: eigensolver CPU %.2f s with switchover vs %.2f s, final DOF %lld/%lld, max dlambda %.1e", l,
                pic.total_cpu_eigen, plain.total_cpu_eigen, static_cast<long long>(b.dof),
                static_cast<long long>(a.dof), dl));
  }
  return v;
}

Verdict dense_oracle(AcceptanceSuite&) {
  Verdict v;
  struct Case {
    std::string problem;
    int order, M;
  };
  const std::vector<Case> cases = {{"unit_square", 1, 20}, {"lshape", 1, 20}, {"disc_diffusion", 1, 30},
                                   {"perforated:3", 2, 50}, {"schrodinger_simple", 1, 20}};
  for (const Case& cs : cases) {
    const CatalogEntry e = catalog(cs.problem, 1);
    Mesh mesh = e.mesh;
    for (std::size_t k = 0; k < mesh.num_leaves(); ++k) mesh.set_order(static_cast<int>(k), cs.order);
    const SymmetricMatrix K = assemble_stiffness(mesh, e.spec);
    const Eigen::VectorXd mass = assemble_mass(mesh);
    const int n = K.dim();
    if (n > 400) throw std::logic_error("dense oracle case exceeds 400 DOF");
    const Factorization F(K);
    const EigenpairSet p = lowest_eigenpairs(F, mass, cs.M);

    const Eigen::MatrixXd Kd(K.full());
    const Eigen::MatrixXd Md = mass.asDiagonal();
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> dense(Kd, Md);
    const Eigen::VectorXd& lam = dense.eigenvalues();
    const Eigen::MatrixXd& W = dense.eigenvectors();  // M-orthonormal

    double val_err = 0.0, vec_err = 0.0;
    for (int j = 0; j < cs.M; ++j) {
      val_err = std::max(val_err, std::abs(p.values[j] - lam[j]) / lam[j]);
      // Distance of the computed vector from the dense eigenspace of lambda_j.
      std::vector<int> cluster;
      for (int i = 0; i < n; ++i)
        if (std::abs(lam[i] - lam[j]) <= 1e-8 * lam[j]) cluster.push_back(i);
      const Eigen::VectorXd x = p.vectors.col(j);
      Eigen::VectorXd proj = Eigen::VectorXd::Zero(n);
      for (int i : cluster) proj += W.col(i) * W.col(i).dot(mass.cwiseProduct(x));
      const Eigen::VectorXd r = x - proj;
      vec_err = std::max(vec_err, std::sqrt(r.dot(mass.cwiseProduct(r))));
    }
    v.check(val_err <= 1e-10 && vec_err <= 1e-6,
            fmt("%s p=%d (%d DOF, %d pairs): eigenvalue %.1e, eigenspace %.1e", cs.problem.c_str(), cs.order, n, cs.M,
                val_err, vec_err));
  }
  return v;
}

using CriterionFn = Verdict (*)(AcceptanceSuite&);
struct Criterion {
  const char* name;
  CriterionFn fn;
};
const Criterion kCriteria[AcceptanceSuite::kCount] = {
    {"unit-square eigenvalue oracle", unit_square_oracle},
    {"L-shape reference eigenvalues and fixed-order rate", lshape_references},
    {"LR competitive with CR-sum", lr_competitiveness},
    {"hp exponential convergence", exponential_convergence},
    {"1D envelope inequality", envelope_inequality},
    {"1D landscape Fourier expansion", fourier_expansion},
    {"estimator effectivity stability", estimator_reliability},
    {"regularity ordering at a diffusion cross point", kellogg_ordering},
    {"perforated domain smooth eigenvector", perforated_domain},
    {"pausing the eigensolver", pausing},
    {"Picard switchover", picard_switchover},
    {"dense eigensolver oracle", dense_oracle},
};

}  // namespace

AcceptanceSuite::AcceptanceSuite(std::string out_dir) : out_dir_(std::move(out_dir)) {}

std::string AcceptanceSuite::name(int id) {
  if (id < 1 || id > kCount) throw std::out_of_range("criterion id must be in 1.." + std::to_string(kCount));
  return kCriteria[id - 1].name;
}

const AcceptanceSuite::Run& AcceptanceSuite::adaptive(const RunConfig& cfg) {
  const std::string key = config_key(cfg);
  auto it = cache_.find(key);
  if (it == cache_.end()) {
    auto r = std::make_unique<Run>();
    RunOutputs out;
    out.dir = out_dir_;
    r->log = lhp::run(cfg, &r->state, out);
    it = cache_.emplace(key, std::move(r)).first;
  }
  return *it->second;
}

CriterionResult AcceptanceSuite::run(int id) {
  CriterionResult res;
  res.id = id;
  res.name = name(id);
  const double t0 = wall_seconds();
  try {
    Verdict v = kCriteria[id - 1].fn(*this);
    res.pass = v.pass;
    res.detail = v.detail;
  } catch (const std::exception& e) {
    res.pass = false;
    res.detail = std::string("error: ") + e.what();
  }
  res.seconds = wall_seconds() - t0;
  return res;
}

std::vector<CriterionResult> AcceptanceSuite::run_all(const std::vector<int>& ids, std::ostream* progress) {
  std::vector<CriterionResult> out;
  for (int id : ids) {
    out.push_back(run(id));
    if (progress) *progress << format_result(out.back()) << std::endl;
  }
  return out;
}

std::string format_result(const CriterionResult& r) {
  return fmt("[%s] %d %s: %s (%.1f s)", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.detail.c_str(), r.seconds);
}

}  // namespace lhp
