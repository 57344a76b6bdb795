#include "lhp/basis.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace lhp;

TEST_SUITE("basis") {
  TEST_CASE("Gauss rules integrate monomials up to degree 2n-1") {
    for (int n = 1; n <= 12; ++n) {
      const GaussRule1D& g = gauss_rule(n);
      for (int d = 0; d <= 2 * n - 1; ++d) {
        double q = 0.0;
        for (int i = 0; i < n; ++i) q += g.weights[i] * std::pow(g.nodes[i], d);
        const double exact = d % 2 ? 0.0 : 2.0 / (d + 1);
        CHECK(q == doctest::Approx(exact).epsilon(1e-13));
      }
    }
  }

  TEST_CASE("tensor basis is orthonormal on the reference square") {
    const int p = 6;
    const QuadratureRule r = element_rule(p);
    const BasisTable t = eval_basis(p, r.nodes, 0);
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(modes(p), modes(p));
    for (std::size_t q = 0; q < r.weights.size(); ++q) G += r.weights[q] * t.values.row(q).transpose() * t.values.row(q);
    CHECK((G - Eigen::MatrixXd::Identity(modes(p), modes(p))).cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("Legendre derivatives match finite differences") {
    const double x = 0.3, h = 1e-5;
    const Legendre1D a = legendre(kMaxOrder, x), lo = legendre(kMaxOrder, x - h), hi = legendre(kMaxOrder, x + h);
    for (int k = 0; k <= kMaxOrder; ++k) {
      CHECK(a.d1[k] == doctest::Approx((hi.value[k] - lo.value[k]) / (2 * h)).epsilon(1e-7));
      CHECK(a.d2[k] == doctest::Approx((hi.d1[k] - lo.d1[k]) / (2 * h)).epsilon(1e-6));
    }
  }

  TEST_CASE("mode layout") {
    CHECK(modes(2) == 9);
    CHECK(mode_index(3, 2, 1) == 9);
    CHECK_THROWS_AS(eval_basis(2, std::vector<std::array<double, 2>>{{0.0, 0.0}}, 3), UnsupportedDerivative);
  }

  TEST_CASE("coefficient transfer reproduces the parent expansion") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (auto [scale, shift] : {std::pair{0.5, -0.5}, std::pair{0.5, 0.5}, std::pair{0.25, 0.125}}) {
      const int pp = 4, pc = 6;
      Eigen::VectorXd c(pp + 1);
      for (auto& v : c) v = U(rng);
      const Eigen::VectorXd cc = transfer_1d(pp, pc, scale, shift) * c;
      for (double x : {-0.9, -0.2, 0.4, 1.0}) {
        const Legendre1D lp = legendre(pp, scale * x + shift), lc = legendre(pc, x);
        double parent = 0.0, child = 0.0;
        for (int k = 0; k <= pp; ++k) parent += c[k] * lp.value[k];
        for (int k = 0; k <= pc; ++k) child += cc[k] * lc.value[k];
        CHECK(child == doctest::Approx(parent).epsilon(1e-12));
      }
    }
  }
}
