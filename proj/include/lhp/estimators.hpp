#pragma once

// Residual a posteriori indicators for the landscape solve and for computed
// eigenpairs, split into per-element contributions.

#include "lhp/assembly.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace lhp {

struct IndicatorField {
  std::string tag;           // "landscape" or "eig<j>"
  std::vector<double> eta2;  // per element, leaf order

  double total() const;
};

struct EstimatorOptions {
  /// Drop the h_e/(A_min p_e) part of the jump weight, keeping only the
  /// penalty-scaled part (the form commonly quoted for A = I).
  bool reduced_jump = false;
};

/// Landscape indicator for u_h solving a(u_h, v) = (f, v) with f = spec.source.
IndicatorField eta_landscape(const Mesh& mesh, const ProblemSpec& spec, const DiscreteField& u,
                             const EstimatorOptions& opt = {});

/// Indicator for one eigenpair (lambda, phi).
IndicatorField eta_eigenpair(const Mesh& mesh, const ProblemSpec& spec, double lambda, const DiscreteField& phi,
                             const EstimatorOptions& opt = {});

/// Indicators for many eigenpairs over one mesh, sharing the tabulation.
/// Column j of `vectors` pairs with values[j]; tags are eig1, eig2, ...
std::vector<IndicatorField> eta_eigenpairs(const Mesh& mesh, const ProblemSpec& spec, const Eigen::VectorXd& values,
                                           const Eigen::MatrixXd& vectors, const EstimatorOptions& opt = {});

/// Energy DG norm of u_h - reference, with u_h prolongated to the reference
/// mesh. Throws MeshError when the spaces are not nested.
double dg_error(const Mesh& mesh, const DiscreteField& u, const Mesh& ref_mesh, const DiscreteField& ref,
                const ProblemSpec& spec);

/// `indicators v1 <tag> <n>` then `id eta2` (plus a regularity column if given).
void write_indicator_dump(std::ostream& os, const IndicatorField& f, const std::vector<double>* regularity = nullptr);

}  // namespace lhp
