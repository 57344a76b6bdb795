#include "lhp/eigensolve.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

using namespace lhp;

namespace {

Mesh mixed_mesh() {
  Mesh m(RootGrid::rectangle(0, 0, 1, 1, 3, 3), 2);
  m = refine_elements(m, std::vector<int>{4});
  for (int k = 0; k < static_cast<int>(m.num_leaves()); ++k) m.set_order(k, 1 + k % 3);
  return m;
}

struct Dense {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

Dense dense_pairs(const SymmetricMatrix& K, const Eigen::VectorXd& mass) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(K.full()),
                                                                 Eigen::MatrixXd(mass.asDiagonal()));
  return {es.eigenvalues(), es.eigenvectors()};
}

}  // namespace

TEST_SUITE("eigensolve") {
  TEST_CASE("Lanczos matches a dense generalized solver") {
    const ProblemSpec s = test::square_spec(3, 4.0);
    const Mesh m = mixed_mesh();
    const SymmetricMatrix K = assemble_stiffness(m, s);
    REQUIRE(K.dim() <= 400);
    const Eigen::VectorXd mass = assemble_mass(m);
    const Factorization F(K);
    for (int block : {1, 3}) {
      LanczosOptions o;
      o.block = block;
      o.seed = 11;
      const EigenpairSet p = lowest_eigenpairs(F, mass, 12, o);
      const Dense d = dense_pairs(K, mass);
      CHECK(p.all_converged());
      for (int j = 0; j < 12; ++j) CHECK(std::abs(p.values[j] - d.values[j]) / d.values[j] < 1e-10);
      const Eigen::MatrixXd G = p.vectors.transpose() * mass.asDiagonal() * p.vectors;
      CHECK((G - Eigen::MatrixXd::Identity(12, 12)).cwiseAbs().maxCoeff() < 1e-10);
      for (int j = 0; j < 12; ++j) CHECK(relative_residual(K, mass, p.values[j], p.vectors.col(j)) < 1e-8);
    }
  }

  TEST_CASE("unit square spectrum with a double eigenvalue") {
    const ProblemSpec s = test::square_spec(8);
    const Mesh m(s.grid, 5);
    const Factorization F(assemble_stiffness(m, s));
    const EigenpairSet p = lowest_eigenpairs(F, assemble_mass(m), 6);
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const double exact[] = {2 * pi2, 5 * pi2, 5 * pi2, 8 * pi2, 10 * pi2, 10 * pi2};
    for (int j = 0; j < 6; ++j) CHECK(p.values[j] == doctest::Approx(exact[j]).epsilon(1e-7));
    CHECK(p.backsolves > 0);
  }

  TEST_CASE("Picard refinement restores pairs from a nearby space") {
    const ProblemSpec s = test::square_spec(4);
    Mesh coarse(s.grid, 3);
    Mesh fine = test::uniform(coarse);
    const Factorization Fc(assemble_stiffness(coarse, s));
    const EigenpairSet pc = lowest_eigenpairs(Fc, assemble_mass(coarse), 6);
    const SymmetricMatrix Kf = assemble_stiffness(fine, s);
    const Eigen::VectorXd mf = assemble_mass(fine);
    const Factorization Ff(Kf);
    const EigenpairSet exact = lowest_eigenpairs(Ff, mf, 6);

    EigenpairSet start;
    start.vectors = prolongate(coarse, DofMap::build(coarse), pc.vectors, fine);
    start.values = pc.values;
    start.residuals = Eigen::VectorXd::Ones(6);
    start.converged.assign(6, false);
    PicardOptions o;
    o.tol = 1e-10;
    PicardReport rep;
    const EigenpairSet r = picard_refine(Ff, mf, start, {0, 1, 2, 3, 4, 5}, o, &rep);
    CHECK(r.all_converged());
    CHECK(rep.iterations > 0);
    for (int j = 0; j < 6; ++j) CHECK(std::abs(r.values[j] - exact.values[j]) / exact.values[j] < 1e-9);
  }

  TEST_CASE("Picard leaves unselected pairs untouched") {
    const ProblemSpec s = test::square_spec(4);
    Mesh m(s.grid, 2);
    const Factorization F(assemble_stiffness(m, s));
    const Eigen::VectorXd mass = assemble_mass(m);
    const EigenpairSet p = lowest_eigenpairs(F, mass, 4);
    const EigenpairSet r = picard_refine(F, mass, p, {2, 3});
    CHECK(r.values[0] == p.values[0]);
    CHECK((r.vectors.col(1) - p.vectors.col(1)).norm() == 0.0);
  }

  TEST_CASE("landscape solve") {
    const ProblemSpec s = test::square_spec(2);
    Mesh m(s.grid, 2);
    const SymmetricMatrix K = assemble_stiffness(m, s);
    const Factorization F(K);
    const Eigen::VectorXd b = assemble_source(m, s.source);
    const Eigen::VectorXd u = solve_landscape(F, b);
    CHECK((K.apply(u) - b).norm() < 1e-12 * b.norm());
    CHECK(F.backsolves() >= 1);
  }
}
