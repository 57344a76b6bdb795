#include "lhp/problem.hpp"

#include <cmath>

namespace lhp {

double Diffusion::lambda_min() const {
  const double m = 0.5 * (xx + yy);
  const double d = std::sqrt(0.25 * (xx - yy) * (xx - yy) + xy * xy);
  return m - d;
}

double Diffusion::lambda_max() const {
  const double m = 0.5 * (xx + yy);
  const double d = std::sqrt(0.25 * (xx - yy) * (xx - yy) + xy * xy);
  return m + d;
}

double Polynomial2D::operator()(double x, double y) const {
  double s = 0.0;
  for (const auto& t : terms) s += t.c * std::pow(x, t.px) * std::pow(y, t.py);
  return s;
}

int Polynomial2D::degree() const {
  int d = 0;
  for (const auto& t : terms)
    if (t.c != 0.0) d = std::max(d, t.px + t.py);
  return d;
}

bool Polynomial2D::is_zero() const {
  for (const auto& t : terms)
    if (t.c != 0.0) return false;
  return true;
}

void ProblemSpec::validate() const {
  if (!(gamma > 0.0)) throw ProblemError(name + ": penalty parameter must be positive");
  if (subdomains.empty()) throw ProblemError(name + ": no subdomains");
  for (const auto& s : subdomains) {
    if (!s.A.is_spd()) throw ProblemError(name + ": diffusion tensor is not SPD");
    if (!(s.V >= 0.0)) throw ProblemError(name + ": potential must be nonnegative");
  }
  if (root_subdomain.size() != grid.active.size()) throw ProblemError(name + ": subdomain map size mismatch");
  for (std::size_t c = 0; c < root_subdomain.size(); ++c) {
    const int s = root_subdomain[c];
    if (grid.active[c] && (s < 0 || s >= static_cast<int>(subdomains.size())))
      throw ProblemError(name + ": active root cell without a valid subdomain");
  }
  if (initial_order < 1 || initial_order > 10) throw ProblemError(name + ": initial order out of range");
}

Mesh ProblemSpec::initial_mesh() const {
  validate();
  Mesh mesh(grid, initial_order);
  for (int k = 0; k < static_cast<int>(mesh.num_leaves()); ++k) {
    const Cell& c = mesh.leaf(k);
    mesh.set_subdomain(k, root_subdomain[static_cast<std::size_t>(c.i + grid.nx * c.j)]);
  }
  return mesh;
}

double ProblemSpec::domain_area() const {
  double n = 0.0;
  for (bool a : grid.active) n += a ? 1.0 : 0.0;
  return n * grid.hx * grid.hy;
}

void check_alignment(const Mesh& mesh, const ProblemSpec& spec) {
  const RootGrid& g = mesh.grid();
  if (g.nx != spec.grid.nx || g.ny != spec.grid.ny || g.active != spec.grid.active)
    throw ProblemError(spec.name + ": mesh root grid does not match the problem");
  for (int k = 0; k < static_cast<int>(mesh.num_leaves()); ++k) {
    const Cell& c = mesh.leaf(k);
    const auto ri = c.i >> c.level;
    const auto rj = c.j >> c.level;
    const int s = spec.root_subdomain[static_cast<std::size_t>(ri + g.nx * rj)];
    if (s != c.subdomain) throw ProblemError(spec.name + ": element subdomain does not align with the problem");
  }
}

}  // namespace lhp
