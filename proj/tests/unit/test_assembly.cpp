#include "lhp/assembly.hpp"
#include "lhp/eigensolve.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace lhp;

namespace {

// u = x(1-x) y(1-y) lies in Q2, so SIPG reproduces it exactly.
double bubble(double x, double y) { return x * (1 - x) * y * (1 - y); }

Polynomial2D bubble_source(double V) {
  Polynomial2D f{{{2, 1, 0}, {-2, 2, 0}, {2, 0, 1}, {-2, 0, 2}}};
  for (auto t : std::vector<Polynomial2D::Term>{{1, 1, 1}, {-1, 2, 1}, {-1, 1, 2}, {1, 2, 2}})
    f.terms.push_back({V * t.c, t.px, t.py});
  return f;
}

Mesh graded_square(int n, int p) {
  Mesh m(RootGrid::rectangle(0, 0, 1, 1, n, n), p);
  m = refine_elements(m, std::vector<int>{0, n * n - 1});
  m = refine_elements(m, std::vector<int>{1});
  return m;
}

// Series for -Laplace u = 1 on the unit square at its centre.
double centre_value_series() {
  const double pi = std::numbers::pi;
  double s = 0.0;
  for (int m = 1; m < 4000; m += 2)
    for (int n = 1; n < 4000; n += 2) {
      const double sign = ((m + n) / 2) % 2 ? 1.0 : -1.0;  // sin(m pi/2) sin(n pi/2)
      s += sign * 16.0 / (pi * pi * pi * pi * m * n * (m * m + n * n));
    }
  return s;
}

}  // namespace

TEST_SUITE("assembly") {
  TEST_CASE("mass is |K|/4 per mode") {
    Mesh m = graded_square(3, 3);
    const Eigen::VectorXd M = assemble_mass(m);
    const DofMap d = DofMap::build(m);
    REQUIRE(M.size() == d.dim());
    for (int k = 0; k < d.num_elements(); ++k)
      for (int i = d.offset[k]; i < d.offset[k + 1]; ++i) CHECK(M[i] == doctest::Approx(m.box(k).area() / 4.0));
  }

  TEST_CASE("constant potential shifts the operator by V M") {
    Mesh m = graded_square(2, 2);
    const ProblemSpec s0 = test::square_spec(2, 0.0), s1 = test::square_spec(2, 7.5);
    const SparseMatrix D = assemble_stiffness(m, s1).full() - assemble_stiffness(m, s0).full();
    const Eigen::MatrixXd expected = Eigen::MatrixXd(7.5 * assemble_mass(m).asDiagonal());
    CHECK((Eigen::MatrixXd(D) - expected).cwiseAbs().maxCoeff() < 1e-10);
  }

  TEST_CASE("stiffness is symmetric and splits into its terms") {
    Mesh m = graded_square(2, 3);
    const ProblemSpec s = test::square_spec(2, 1.0);
    const SparseMatrix full = assemble_stiffness(m, s).full();
    CHECK(Eigen::MatrixXd(full - SparseMatrix(full.transpose())).cwiseAbs().maxCoeff() < 1e-12);
    SparseMatrix sum = assemble_stiffness(m, s, {true, false, false}).full();
    sum += assemble_stiffness(m, s, {false, true, false}).full();
    sum += assemble_stiffness(m, s, {false, false, true}).full();
    CHECK(Eigen::MatrixXd(sum - full).cwiseAbs().maxCoeff() < 1e-10);
  }

  TEST_CASE("polynomial solution is reproduced on a mesh with hanging nodes") {
    for (double V : {0.0, 3.0}) {
      ProblemSpec s = test::square_spec(3, V);
      s.source = bubble_source(V);
      Mesh m = graded_square(3, 2);
      const Factorization F(assemble_stiffness(m, s));
      const DiscreteField u{DofMap::build(m), solve_landscape(F, assemble_source(m, s.source))};
      double err = 0.0;
      for (double x : {0.05, 0.31, 0.5, 0.77, 0.98})
        for (double y : {0.02, 0.4, 0.66, 0.93}) err = std::max(err, std::abs(eval_field(m, u, x, y) - bubble(x, y)));
      CHECK(err < 1e-11);
      CHECK(penalty_seminorm2(m, s, u) < 1e-20);
    }
  }

  TEST_CASE("landscape centre value matches the Fourier series") {
    const ProblemSpec s = test::square_spec(16);
    Mesh m(s.grid, 4);
    const Factorization F(assemble_stiffness(m, s));
    const DiscreteField u{DofMap::build(m), solve_landscape(F, assemble_source(m, s.source))};
    CHECK(eval_field(m, u, 0.5, 0.5) == doctest::Approx(centre_value_series()).epsilon(1e-6));
  }

  TEST_CASE("energy norm of a single mode") {
    const ProblemSpec s = test::square_spec(1, 2.0);
    Mesh m(s.grid, 2);
    DiscreteField f{DofMap::build(m), Eigen::VectorXd::Zero(9)};
    f.coeffs[0] = 1.0;  // constant 1/2 on the reference square: u = 1/2 on (0,1)^2
    // grad u = 0, int V u^2 = 2 * 1/4, penalty: 4 sides each gamma p^2 / h * int (1/2)^2.
    const double expected = 0.5 + 4 * (10.0 * 4.0 / 1.0 * 0.25);
    CHECK(dg_norm2(m, s, f) == doctest::Approx(expected));
  }

  TEST_CASE("small penalty is rejected as indefinite") {
    ProblemSpec s = test::square_spec(4);
    s.gamma = 1e-3;
    Mesh m(s.grid, 4);
    CHECK_THROWS_AS(Factorization(assemble_stiffness(m, s)), IndefiniteMatrix);
  }
}
