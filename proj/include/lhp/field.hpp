#pragma once

// Discrete fields over the DG space: per-element modal coefficient blocks laid
// out contiguously in leaf order, and helpers to evaluate them in physical
// coordinates.

#include "lhp/basis.hpp"
#include "lhp/mesh.hpp"

#include <Eigen/Dense>

#include <array>
#include <span>
#include <vector>

namespace lhp {

struct DofMap {
  std::vector<int> offset;  // offset[k] .. offset[k+1] are the modes of leaf k
  std::vector<int> order;

  static DofMap build(const Mesh& mesh);
  int dim() const { return offset.back(); }
  int size(int k) const { return offset[k + 1] - offset[k]; }
  int num_elements() const { return static_cast<int>(order.size()); }
};

struct DiscreteField {
  DofMap dofs;
  Eigen::VectorXd coeffs;

  auto block(int k) const { return coeffs.segment(dofs.offset[k], dofs.size(k)); }
};

/// Basis values and physical first derivatives of an order-p element with
/// bounding box `b`, at physical points (#points x modes(p)).
struct TraceTable {
  Eigen::MatrixXd val, dx, dy;
};
TraceTable element_table(const Box& b, int p, std::span<const std::array<double, 2>> points);

/// Physical second derivatives as well.
struct HessianTable {
  Eigen::MatrixXd val, dx, dy, dxx, dxy, dyy;
};

/// Tabulation at the tensor Gauss points of an element (n points per direction),
/// with the physical quadrature weights. Tables are cached per (p, n).
struct ElementQuadrature {
  std::vector<std::array<double, 2>> points;  // physical
  Eigen::VectorXd weights;                    // physical
  const BasisTable* ref = nullptr;            // reference tables (deriv 2)
  double sx = 1.0, sy = 1.0;                  // d(xi)/dx, d(eta)/dy
};
ElementQuadrature element_quadrature(const Box& b, int p, int n);

/// Gauss points along an edge with physical weights.
struct EdgeQuadrature {
  std::vector<std::array<double, 2>> points;
  Eigen::VectorXd weights;
};
EdgeQuadrature edge_quadrature(const Edge& e, int n);

/// Reference coordinates of a physical point in box b.
inline std::array<double, 2> to_reference(const Box& b, double x, double y) {
  return {(2.0 * x - b.x0 - b.x1) / b.width(), (2.0 * y - b.y0 - b.y1) / b.height()};
}

/// Leaf containing (x, y), or -1 outside the domain. Points on shared sides
/// resolve to the element with the larger lower-left corner.
int locate_leaf(const Mesh& mesh, double x, double y);

struct PointValue {
  double u = 0.0, ux = 0.0, uy = 0.0;
};
PointValue eval_on_element(const Mesh& mesh, const DiscreteField& f, int k, double x, double y);
/// Value at (x, y); 0 outside the domain.
double eval_field(const Mesh& mesh, const DiscreteField& f, double x, double y);

/// Exact prolongation of a field on `coarse` to the nested space on `fine`.
/// Throws MeshError if the spaces are not nested.
DiscreteField prolongate(const Mesh& coarse, const DiscreteField& f, const Mesh& fine);
/// Column-wise prolongation of several fields sharing the coarse layout.
Eigen::MatrixXd prolongate(const Mesh& coarse, const DofMap& coarse_dofs, const Eigen::MatrixXd& C,
                           const Mesh& fine);

/// Fix the sign so that the largest-magnitude coefficient is positive.
void normalize_sign(Eigen::Ref<Eigen::VectorXd> v);

}  // namespace lhp
