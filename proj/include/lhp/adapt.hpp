#pragma once

// Marking strategies and application of hp refinement plans.

#include "lhp/estimators.hpp"

#include <iosfwd>
#include <vector>

namespace lhp {

struct RefinementPlan {
  std::vector<int> h_set;  // ascending leaf ids to split
  std::vector<int> p_set;  // ascending leaf ids whose order is raised
};

struct AdaptParams {
  double r = 10.0;        // percent of elements marked
  double tol_ana = 0.25;  // smoothness threshold: below means p-refinement
  int p_max = 10;
  int max_order_jump = 2;
  bool h_only = false;    // fixed-order runs: p-marked elements are split instead
};

/// The ceil(r N / 100) elements with the largest indicators, ties broken by
/// ascending id; returned in rank order. Throws std::invalid_argument unless
/// 0 < r <= 100.
std::vector<int> mark_top_fraction(const std::vector<double>& eta2, double r);

/// h/p split of a marked set by the smoothness of `field` (p < 2 means h).
RefinementPlan split_by_smoothness(const std::vector<int>& marked, const DiscreteField& field, double tol_ana);

RefinementPlan plan_single_eig(const IndicatorField& eta, const DiscreteField& phi, const AdaptParams& prm);

/// Sum of indicators; smoothness of the sum of the eigenvectors.
RefinementPlan plan_cluster_sum(const std::vector<IndicatorField>& eta, const DofMap& dofs,
                                const Eigen::MatrixXd& vectors, const AdaptParams& prm);

/// Max of indicators; smoothness of the eigenvector attaining the max (ties to
/// the lowest index).
RefinementPlan plan_cluster_max(const std::vector<IndicatorField>& eta, const DofMap& dofs,
                                const Eigen::MatrixXd& vectors, const AdaptParams& prm);

RefinementPlan plan_landscape(const IndicatorField& eta, const DiscreteField& u, const AdaptParams& prm);

struct AdaptReport {
  int capped = 0;         // p-marked elements already at p_max
  int order_raised = 0;   // elements raised to bound the order jump
};

/// Raise the orders of p_set (capped at p_max), split h_set with 1-irregular
/// closure, then raise the smaller order across any edge until neighbours
/// differ by at most max_order_jump.
Mesh enforce_local_properties(const RefinementPlan& plan, const Mesh& mesh, const AdaptParams& prm,
                              AdaptReport* report = nullptr);

/// `plan v1` then `id h|p` lines in ascending id order.
void write_plan_dump(std::ostream& os, const RefinementPlan& plan);

}  // namespace lhp
