#pragma once

// Orthonormal tensor-product Legendre basis on the reference square [-1,1]^2
// and Gauss-Legendre quadrature.

#include <Eigen/Dense>

#include <array>
#include <span>
#include <stdexcept>
#include <vector>

namespace lhp {

inline constexpr int kMaxOrder = 10;

/// Number of modes of Q_p on the reference square.
constexpr int modes(int p) { return (p + 1) * (p + 1); }

/// Local index of the mode L_a(x) L_b(y) in an order-p block.
constexpr int mode_index(int p, int a, int b) { return a * (p + 1) + b; }

struct GaussRule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1,1], exact for degree 2n-1.
const GaussRule1D& gauss_rule(int n);

struct QuadratureRule {
  std::vector<std::array<double, 2>> nodes;  // reference coordinates
  std::vector<double> weights;
  int exactness = 0;  // per coordinate direction
};

/// Tensor Gauss rule with (p_max+2)^2 points; exact for degree 2*p_max+3 per
/// direction.
QuadratureRule element_rule(int p_max);

/// Normalized Legendre polynomials sqrt((2k+1)/2) P_k and their first two
/// derivatives at x, for k = 0..p.
struct Legendre1D {
  std::array<double, kMaxOrder + 1> value{};
  std::array<double, kMaxOrder + 1> d1{};
  std::array<double, kMaxOrder + 1> d2{};
};
Legendre1D legendre(int p, double x);

/// Tabulated basis: `values` is (#points x modes(p)); for deriv >= 1 `dx`, `dy`
/// hold the gradient components; for deriv == 2 `dxx`, `dxy`, `dyy` the Hessian.
struct BasisTable {
  Eigen::MatrixXd values;
  Eigen::MatrixXd dx, dy;
  Eigen::MatrixXd dxx, dxy, dyy;
};

class UnsupportedDerivative : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

BasisTable eval_basis(int p, std::span<const std::array<double, 2>> points, int deriv);

/// 1D reference matrices for the leading (p+1) modes:
///   stiffness(a,c) = int L_a' L_c',  gradient(a,c) = int L_a' L_c.
struct Reference1D {
  Eigen::MatrixXd stiffness;
  Eigen::MatrixXd gradient;
};
const Reference1D& reference_1d();

/// Coefficient transfer for the affine sub-interval map x_parent = scale*x + shift:
/// returns T with c_child = T * c_parent for a 1D expansion of order p_parent
/// represented exactly in order p_child >= p_parent.
Eigen::MatrixXd transfer_1d(int p_parent, int p_child, double scale, double shift);

}  // namespace lhp
