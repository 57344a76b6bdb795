#include "lhp/estimators.hpp"
#include "lhp/eigensolve.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <numeric>
#include <sstream>

using namespace lhp;

namespace {

double landscape_eta(const ProblemSpec& s, const Mesh& m) {
  const Factorization F(assemble_stiffness(m, s));
  const DiscreteField u{DofMap::build(m), solve_landscape(F, assemble_source(m, s.source))};
  return eta_landscape(m, s, u).total();
}

}  // namespace

TEST_SUITE("estimators") {
  TEST_CASE("indicators are per element and non-negative") {
    const CatalogEntry e = catalog("lshape", 1);
    const Factorization F(assemble_stiffness(e.mesh, e.spec));
    const DiscreteField u{DofMap::build(e.mesh), solve_landscape(F, assemble_source(e.mesh, e.spec.source))};
    const IndicatorField eta = eta_landscape(e.mesh, e.spec, u);
    CHECK(eta.tag == "landscape");
    REQUIRE(eta.eta2.size() == e.mesh.num_leaves());
    for (double v : eta.eta2) CHECK(v >= 0.0);
    CHECK(eta.total() == doctest::Approx(std::accumulate(eta.eta2.begin(), eta.eta2.end(), 0.0)));

    const EigenpairSet p = lowest_eigenpairs(F, assemble_mass(e.mesh), 3);
    const auto many = eta_eigenpairs(e.mesh, e.spec, p.values, p.vectors);
    REQUIRE(many.size() == 3);
    CHECK(many[1].tag == "eig2");
    const IndicatorField one = eta_eigenpair(e.mesh, e.spec, p.values[1], {u.dofs, p.vectors.col(1)});
    CHECK(one.total() == doctest::Approx(many[1].total()).epsilon(1e-12));
  }

  TEST_CASE("exact discrete solution has a vanishing indicator") {
    ProblemSpec s = test::square_spec(2);
    s.source = Polynomial2D{{{2, 1, 0}, {-2, 2, 0}, {2, 0, 1}, {-2, 0, 2}}};
    Mesh m(s.grid, 2);
    m = refine_elements(m, std::vector<int>{0});
    CHECK(landscape_eta(s, m) < 1e-20);
  }

  TEST_CASE("uniform refinement does not increase the landscape indicator") {
    for (const char* name : {"unit_square", "lshape", "disc_diffusion", "schrodinger_rough"}) {
      const CatalogEntry e = catalog(name, 1);
      Mesh m = e.mesh;
      double prev = landscape_eta(e.spec, m);
      for (int level = 0; level < 2; ++level) {
        m = test::uniform(m);
        const double next = landscape_eta(e.spec, m);
        CHECK_MESSAGE(next <= prev, name);
        prev = next;
      }
    }
  }

  TEST_CASE("discrete error against a nested reference") {
    const ProblemSpec s = test::square_spec(4);
    Mesh coarse(s.grid, 2);
    Mesh fine = test::uniform(coarse);
    test::set_orders(fine, 3);
    auto solve = [&](const Mesh& m) {
      const Factorization F(assemble_stiffness(m, s));
      return DiscreteField{DofMap::build(m), solve_landscape(F, assemble_source(m, s.source))};
    };
    const DiscreteField uc = solve(coarse), uf = solve(fine);
    CHECK(dg_error(fine, uf, fine, uf, s) == doctest::Approx(0.0));
    CHECK(dg_error(coarse, uc, fine, uf, s) > 0.0);
    CHECK_THROWS_AS(dg_error(fine, uf, coarse, uc, s), MeshError);
  }

  TEST_CASE("indicator dump") {
    IndicatorField f{"landscape", {0.5, 0.25}};
    std::vector<double> reg = {0.1, -1.0};
    std::ostringstream os;
    write_indicator_dump(os, f, &reg);
    CHECK(os.str().rfind("indicators v1 landscape 2\n0 0.5 0.10000000000000001\n", 0) == 0);
  }
}
