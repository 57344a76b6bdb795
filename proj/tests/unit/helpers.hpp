#pragma once

#include "lhp/problems.hpp"

#include <vector>

namespace lhp::test {

inline std::vector<int> all_leaves(const Mesh& m) {
  std::vector<int> v(m.num_leaves());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = static_cast<int>(k);
  return v;
}

inline Mesh uniform(const Mesh& m) { return refine_elements(m, all_leaves(m)); }

inline void set_orders(Mesh& m, int p) {
  for (std::size_t k = 0; k < m.num_leaves(); ++k) m.set_order(static_cast<int>(k), p);
}

/// Unit square spec on an n x n root grid with the given potential.
inline ProblemSpec square_spec(int n, double V = 0.0) {
  ProblemSpec s;
  s.name = "square";
  s.grid = RootGrid::rectangle(0, 0, 1, 1, n, n);
  s.subdomains = {Subdomain{Diffusion::isotropic(1.0), V}};
  s.root_subdomain.assign(static_cast<std::size_t>(n) * n, 0);
  return s;
}

}  // namespace lhp::test
