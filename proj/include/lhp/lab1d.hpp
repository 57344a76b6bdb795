#pragma once

// One-dimensional laboratory for -u'' + V u on (0, 1) with homogeneous
// Dirichlet data: conforming P1 elements with lumped mass, so every discrete
// problem is a symmetric tridiagonal one.

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <vector>

namespace lhp::lab1d {

/// Piecewise constant on a uniform partition of (0, 1).
struct Potential1D {
  std::vector<double> values;  // one per subinterval, all >= 0

  int pieces() const { return static_cast<int>(values.size()); }
  std::vector<double> breakpoints() const;
  double operator()(double x) const;
  /// Throws std::invalid_argument on an empty or negative potential.
  void validate() const;

  static Potential1D constant(double c, int pieces = 1);
  /// iid uniform values on [lo, hi] from a 64-bit Mersenne Twister.
  static Potential1D seeded(std::uint64_t seed, int pieces, double lo, double hi);
};

/// The value range reported for the published 32-piece potential.
inline constexpr double kPublishedVMin = 5274.4361;
inline constexpr double kPublishedVMax = 98928.04;

class ResolutionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Solution1D {
  int intervals = 0;
  Eigen::VectorXd x;        // all nodes, boundary included
  Eigen::VectorXd u;        // landscape at the nodes
  Eigen::VectorXd lambda;   // ascending
  Eigen::MatrixXd psi;      // nodal values, columns orthonormal in the lumped L2 product

  double h() const { return 1.0 / intervals; }
};

/// Landscape and lowest n_pairs eigenpairs on `n_dof` intervals. The element
/// count must be a multiple of the potential's piece count and at least
/// 10 n_pairs (ResolutionError otherwise).
Solution1D solve_1d(const Potential1D& V, int n_dof, int n_pairs);

/// Solution of -v'' + V v = g on the same discretization, g given at the nodes.
Eigen::VectorXd solve_rhs(const Potential1D& V, int n_dof, const Eigen::VectorXd& g);

/// max over pairs and nodes of |psi_j(x)| / (lambda_j |psi_j|_inf) - u(x).
/// Non-positive when the envelope holds.
double envelope_check(const Solution1D& s);

struct FourierResult {
  std::vector<double> c;   // c_n = (integral of psi_n) / lambda_n, n = 1..N
  Eigen::VectorXd partial; // sum of c_n psi_n at the nodes
  double l2_error = 0.0;   // |u - partial|_2
  double l2_norm_u = 0.0;
};
/// Partial expansion of the landscape in the first N eigenvectors.
FourierResult fourier_reconstruct(const Solution1D& s, int N);

/// 2 sqrt(2) / (n pi)^3 for odd n and 0 for even n: the coefficients for V = 0.
double fourier_coefficient_free(int n);

struct PeakMatch {
  double x_peak;     // location of a local maximum of u
  double u_peak;
  int pair = -1;     // 1-based index of the matched eigenvector, -1 if none
  double distance = 0.0;
};
struct Census {
  std::vector<PeakMatch> peaks;  // descending by u_peak
  int unmatched = 0;
};
/// Local maxima of u, each assigned greedily (highest first) to the
/// lowest-index unassigned eigenvector with a significant |psi| peak nearest
/// to it. Peaks of |psi| count as significant above half of |psi|_inf.
Census ground_state_census(const Solution1D& s);

/// `x V` rows at every breakpoint pair (step plot).
void write_potential_dat(std::ostream& os, const Potential1D& V);
/// `x u -u psi_j/(lambda_j |psi_j|_inf) ...` for the listed 1-based pairs.
void write_envelope_dat(std::ostream& os, const Solution1D& s, const std::vector<int>& pairs);
/// `x u S_N1 S_N2 ...` partial sums for the listed N.
void write_fourier_dat(std::ostream& os, const Solution1D& s, const std::vector<int>& Ns);

}  // namespace lhp::lab1d
