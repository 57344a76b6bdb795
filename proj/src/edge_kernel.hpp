#pragma once

// Shared edge tabulation for assembly and estimators.

#include "lhp/field.hpp"
#include "lhp/problem.hpp"

namespace lhp::detail {

struct EdgeSide {
  int k = -1;
  int p = 0;
  const Subdomain* coef = nullptr;
  TraceTable t;
  Eigen::MatrixXd flux;  // (A grad phi) . n1 at each point
};

struct EdgeData {
  bool interior = false;
  int pe = 0;
  EdgeQuadrature quad;
  EdgeSide s1, s2;
};

inline Eigen::MatrixXd normal_flux(const TraceTable& t, const Diffusion& A, const std::array<double, 2>& n) {
  const double cx = A.xx * n[0] + A.xy * n[1];
  const double cy = A.xy * n[0] + A.yy * n[1];
  return cx * t.dx + cy * t.dy;
}

inline EdgeData tabulate_edge(const Mesh& mesh, const ProblemSpec& spec, const Edge& e, int extra_points = 2) {
  EdgeData d;
  d.interior = e.kind == Edge::Kind::Interior;
  d.s1.k = e.k1;
  d.s1.p = mesh.order(e.k1);
  d.pe = d.s1.p;
  if (d.interior) {
    d.s2.k = e.k2;
    d.s2.p = mesh.order(e.k2);
    d.pe = std::max(d.pe, d.s2.p);
  }
  d.quad = edge_quadrature(e, d.pe + extra_points);
  auto fill = [&](EdgeSide& s) {
    s.coef = &spec.on_leaf(mesh, s.k);
    s.t = element_table(mesh.box(s.k), s.p, d.quad.points);
    s.flux = normal_flux(s.t, s.coef->A, e.n1);
  };
  fill(d.s1);
  if (d.interior) fill(d.s2);
  return d;
}

}  // namespace lhp::detail
