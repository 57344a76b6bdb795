#pragma once

#include "lhp/mesh.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace lhp {

/// Constant symmetric 2x2 diffusion tensor.
struct Diffusion {
  double xx = 1.0, xy = 0.0, yy = 1.0;

  static Diffusion isotropic(double a) { return {a, 0.0, a}; }
  double normal(const std::array<double, 2>& n) const { return n[0] * (xx * n[0] + xy * n[1]) + n[1] * (xy * n[0] + yy * n[1]); }
  std::array<double, 2> apply(double gx, double gy) const { return {xx * gx + xy * gy, xy * gx + yy * gy}; }
  double lambda_min() const;
  double lambda_max() const;
  bool is_spd() const { return xx > 0.0 && xx * yy - xy * xy > 0.0; }
};

struct Subdomain {
  Diffusion A;
  double V = 0.0;
};

/// Sum of c * x^px * y^py terms.
struct Polynomial2D {
  struct Term {
    double c;
    int px, py;
  };
  std::vector<Term> terms;

  static Polynomial2D constant(double c) { return {{{c, 0, 0}}}; }
  double operator()(double x, double y) const;
  int degree() const;
  bool is_zero() const;
};

class ProblemError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ProblemSpec {
  std::string name;
  std::uint64_t seed = 0;
  RootGrid grid;
  std::vector<Subdomain> subdomains;
  /// Subdomain id per root cell (index i + nx*j); -1 for inactive cells.
  std::vector<int> root_subdomain;
  Polynomial2D source = Polynomial2D::constant(1.0);
  double gamma = 10.0;
  int initial_order = 2;
  std::string note;  // free text, e.g. provenance of a stand-in potential

  /// Throws ProblemError unless A is SPD and V >= 0 everywhere and gamma > 0.
  void validate() const;
  /// Initial tensor mesh with subdomain ids assigned.
  Mesh initial_mesh() const;
  const Subdomain& on_leaf(const Mesh& mesh, int k) const { return subdomains[mesh.subdomain(k)]; }
  double domain_area() const;
};

/// Throws ProblemError if a leaf's subdomain id does not match its root cell.
void check_alignment(const Mesh& mesh, const ProblemSpec& spec);

}  // namespace lhp
