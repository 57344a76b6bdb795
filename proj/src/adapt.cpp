#include "lhp/adapt.hpp"

#include "lhp/smoothness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace lhp {

std::vector<int> mark_top_fraction(const std::vector<double>& eta2, double r) {
  if (!(r > 0.0) || r > 100.0) throw std::invalid_argument("mark_top_fraction: r must lie in (0, 100]");
  const int n = static_cast<int>(eta2.size());
  std::vector<int> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  std::stable_sort(ids.begin(), ids.end(), [&](int a, int b) { return eta2[a] > eta2[b]; });
  const int count = std::min(n, static_cast<int>(std::ceil(r * n / 100.0 - 1e-9)));
  ids.resize(count);
  return ids;
}

RefinementPlan split_by_smoothness(const std::vector<int>& marked, const DiscreteField& field, double tol_ana) {
  RefinementPlan plan;
  for (int k : marked) {
    const auto m = regularity(field, k);
    if (m && *m < tol_ana)
      plan.p_set.push_back(k);
    else
      plan.h_set.push_back(k);
  }
  std::sort(plan.h_set.begin(), plan.h_set.end());
  std::sort(plan.p_set.begin(), plan.p_set.end());
  return plan;
}

RefinementPlan plan_single_eig(const IndicatorField& eta, const DiscreteField& phi, const AdaptParams& prm) {
  return split_by_smoothness(mark_top_fraction(eta.eta2, prm.r), phi, prm.tol_ana);
}

RefinementPlan plan_landscape(const IndicatorField& eta, const DiscreteField& u, const AdaptParams& prm) {
  return split_by_smoothness(mark_top_fraction(eta.eta2, prm.r), u, prm.tol_ana);
}

RefinementPlan plan_cluster_sum(const std::vector<IndicatorField>& eta, const DofMap& dofs,
                                const Eigen::MatrixXd& vectors, const AdaptParams& prm) {
  std::vector<double> sum(eta.front().eta2.size(), 0.0);
  for (const auto& f : eta)
    for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += f.eta2[k];
  const DiscreteField phi_sum{dofs, vectors.rowwise().sum()};
  return split_by_smoothness(mark_top_fraction(sum, prm.r), phi_sum, prm.tol_ana);
}

RefinementPlan plan_cluster_max(const std::vector<IndicatorField>& eta, const DofMap& dofs,
                                const Eigen::MatrixXd& vectors, const AdaptParams& prm) {
  const std::size_t n = eta.front().eta2.size();
  std::vector<double> mx(n, -1.0);
  std::vector<int> arg(n, 0);
  for (std::size_t j = 0; j < eta.size(); ++j)
    for (std::size_t k = 0; k < n; ++k)
      if (eta[j].eta2[k] > mx[k]) {
        mx[k] = eta[j].eta2[k];
        arg[k] = static_cast<int>(j);
      }
  RefinementPlan plan;
  for (int k : mark_top_fraction(mx, prm.r)) {
    const auto m = regularity(vectors.col(arg[k]).segment(dofs.offset[k], dofs.size(k)), dofs.order[k]);
    if (m && *m < prm.tol_ana)
      plan.p_set.push_back(k);
    else
      plan.h_set.push_back(k);
  }
  std::sort(plan.h_set.begin(), plan.h_set.end());
  std::sort(plan.p_set.begin(), plan.p_set.end());
  return plan;
}

Mesh enforce_local_properties(const RefinementPlan& plan, const Mesh& mesh, const AdaptParams& prm,
                              AdaptReport* report) {
  if (prm.h_only && !plan.p_set.empty()) {
    RefinementPlan h{plan.h_set, {}};
    h.h_set.insert(h.h_set.end(), plan.p_set.begin(), plan.p_set.end());
    std::sort(h.h_set.begin(), h.h_set.end());
    AdaptParams q = prm;
    q.h_only = false;
    return enforce_local_properties(h, mesh, q, report);
  }
  AdaptReport rep;
  Mesh out = mesh;
  for (int k : plan.p_set) {
    if (out.order(k) < prm.p_max)
      out.set_order(k, out.order(k) + 1);
    else
      ++rep.capped;
  }
  if (!plan.h_set.empty()) {
    std::vector<int> cells;
    cells.reserve(plan.h_set.size());
    for (int k : plan.h_set) cells.push_back(out.leaf_cell(k));
    out.refine_cells(cells);
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (const Edge& e : out.edges()) {
      if (e.kind != Edge::Kind::Interior) continue;
      const int p1 = out.order(e.k1);
      const int p2 = out.order(e.k2);
      if (p1 + prm.max_order_jump < p2) {
        out.set_order(e.k1, p2 - prm.max_order_jump);
        changed = true;
        ++rep.order_raised;
      } else if (p2 + prm.max_order_jump < p1) {
        out.set_order(e.k2, p1 - prm.max_order_jump);
        changed = true;
        ++rep.order_raised;
      }
    }
  }
  if (report) *report = rep;
  return out;
}

void write_plan_dump(std::ostream& os, const RefinementPlan& plan) {
  os << "plan v1\n";
  std::vector<std::pair<int, char>> all;
  for (int k : plan.h_set) all.emplace_back(k, 'h');
  for (int k : plan.p_set) all.emplace_back(k, 'p');
  std::sort(all.begin(), all.end());
  for (const auto& [k, c] : all) os << k << ' ' << c << '\n';
}

}  // namespace lhp
