#pragma once

// SIPG discretization of -div(A grad w) + V w with Dirichlet data, over the
// orthonormal modal DG space of a mesh.

#include "lhp/field.hpp"
#include "lhp/problem.hpp"

#include <Eigen/Sparse>

namespace lhp {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

/// Symmetric matrix stored as its lower triangle (diagonal included).
struct SymmetricMatrix {
  SparseMatrix lower;

  int dim() const { return static_cast<int>(lower.rows()); }
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const { return lower.selfadjointView<Eigen::Lower>() * x; }
  SparseMatrix full() const { return SparseMatrix(lower.selfadjointView<Eigen::Lower>()); }
};

struct AverageWeights {
  double w1, w2, c;
};

/// Diffusion-weighted average weights and penalty weight across an edge with
/// unit normal n between sides with tensors A1 and A2.
AverageWeights average_weights(const Diffusion& A1, const Diffusion& A2, const std::array<double, 2>& n);

/// Selects the parts of the bilinear form; used for linearity checks.
struct AssemblyTerms {
  bool volume = true;
  bool consistency = true;
  bool penalty = true;
};

/// Throws ProblemError if the mesh does not align with the problem's subdomains.
SymmetricMatrix assemble_stiffness(const Mesh& mesh, const ProblemSpec& spec, AssemblyTerms terms = {});

/// Diagonal of the (diagonal) mass matrix: |K|/4 for each mode of K.
Eigen::VectorXd assemble_mass(const Mesh& mesh);

/// Entries int_K f phi for every basis function.
Eigen::VectorXd assemble_source(const Mesh& mesh, const Polynomial2D& f);

/// int_e p_e^2 gamma c / h_e [[u]].[[u]] summed over edges: the penalty part of
/// the energy norm.
double penalty_seminorm2(const Mesh& mesh, const ProblemSpec& spec, const DiscreteField& u);

/// Energy DG norm squared: sum_K |A^{1/2} grad u|^2 + |V^{1/2} u|^2 plus the
/// penalty jump seminorm.
double dg_norm2(const Mesh& mesh, const ProblemSpec& spec, const DiscreteField& u);

}  // namespace lhp
