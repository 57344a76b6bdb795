#include "lhp/lab1d.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace lhp::lab1d;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_SUITE("lab1d") {
  TEST_CASE("free operator: spectrum, modes and landscape") {
    const Solution1D s = solve_1d(Potential1D::constant(0.0), 2048, 5);
    for (int k = 1; k <= 5; ++k) {
      // Lumped P1 eigenvalues are (4/h^2) sin^2(k pi h / 2) exactly; the
      // tridiagonal solver is accurate relative to |T| ~ 4/h^2.
      const double h = s.h();
      CHECK(std::abs(s.lambda[k - 1] - 4 / (h * h) * std::pow(std::sin(k * kPi * h / 2), 2)) < 1e-13 * 4 / (h * h));
      CHECK(s.lambda[k - 1] == doctest::Approx(k * k * kPi * kPi).epsilon(1e-5));
      double err = 0.0;
      for (Eigen::Index i = 0; i < s.x.size(); ++i)
        err = std::max(err, std::abs(std::abs(s.psi(i, k - 1)) - std::abs(std::sqrt(2.0) * std::sin(k * kPi * s.x[i]))));
      CHECK(err < 1e-10);
    }
    for (Eigen::Index i = 0; i < s.x.size(); i += 97) CHECK(s.u[i] == doctest::Approx(s.x[i] * (1 - s.x[i]) / 2).epsilon(1e-10));
    CHECK(s.psi(0, 0) == 0.0);
    CHECK(s.psi(2048, 0) == 0.0);
  }

  TEST_CASE("constant potential shifts the spectrum") {
    const Solution1D a = solve_1d(Potential1D::constant(0.0, 4), 512, 10);
    const Solution1D b = solve_1d(Potential1D::constant(123.0, 4), 512, 10);
    for (int k = 0; k < 10; ++k) CHECK(b.lambda[k] - a.lambda[k] == doctest::Approx(123.0).epsilon(1e-9));
  }

  TEST_CASE("seeded potential: range and Rayleigh bracket") {
    const Potential1D V = Potential1D::seeded(9, 32, kPublishedVMin, kPublishedVMax);
    CHECK(V.pieces() == 32);
    CHECK(V.breakpoints().size() == 33);
    for (double v : V.values) {
      CHECK(v >= kPublishedVMin);
      CHECK(v <= kPublishedVMax);
    }
    const Solution1D s = solve_1d(V, 1024, 10);
    CHECK(s.lambda[0] > 0.0);
    CHECK(s.lambda[0] < kPublishedVMax + kPi * kPi);
    const Eigen::MatrixXd G = s.h() * s.psi.transpose() * s.psi;
    CHECK((G - Eigen::MatrixXd::Identity(10, 10)).cwiseAbs().maxCoeff() < 1e-10);
  }

  TEST_CASE("guards") {
    CHECK_THROWS_AS(solve_1d(Potential1D::constant(0.0), 99, 10), ResolutionError);
    CHECK_THROWS_AS(solve_1d(Potential1D::constant(0.0, 32), 1000, 10), ResolutionError);
    CHECK_THROWS_AS(solve_1d(Potential1D{{1.0, -2.0}}, 1000, 10), std::invalid_argument);
    CHECK_THROWS_AS(solve_1d(Potential1D{}, 1000, 10), std::invalid_argument);
    CHECK_THROWS_AS(fourier_reconstruct(solve_1d(Potential1D::constant(0.0), 100, 2), 3), std::invalid_argument);
  }

  TEST_CASE("envelope holds for every computed pair") {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 3; ++trial) {
      const Potential1D V = Potential1D::seeded(rng(), 16, 0.0, 20000.0);
      const Solution1D s = solve_1d(V, 2048, 200);
      CHECK(envelope_check(s) <= 1e-3 * s.u.maxCoeff());
    }
    const Solution1D one = solve_1d(Potential1D::constant(0.0), 64, 1);
    CHECK(envelope_check(one) <= 0.0);
  }

  TEST_CASE("pointwise stability bound") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const Potential1D V = Potential1D::seeded(5, 32, 0.0, 5000.0);
    const Solution1D s = solve_1d(V, 1024, 0);
    for (int trial = 0; trial < 3; ++trial) {
      Eigen::VectorXd g(1025);
      for (auto& x : g) x = U(rng);
      const Eigen::VectorXd v = solve_rhs(V, 1024, g);
      const double gmax = g.cwiseAbs().maxCoeff();
      for (Eigen::Index i = 1; i < 1024; ++i) CHECK(std::abs(v[i]) <= gmax * s.u[i] + 1e-3 * gmax * s.u.maxCoeff());
    }
  }

  TEST_CASE("Fourier coefficients of the free landscape") {
    const Solution1D s = solve_1d(Potential1D::constant(0.0), 4096, 20);
    const FourierResult f = fourier_reconstruct(s, 20);
    for (int n = 1; n <= 20; ++n) CHECK(std::abs(std::abs(f.c[n - 1]) - fourier_coefficient_free(n)) < 1e-8);
    for (int n = 2; n <= 20; ++n) CHECK(std::abs(f.c[0]) > std::abs(f.c[n - 1]));
    CHECK(fourier_coefficient_free(2) == 0.0);
    CHECK(fourier_coefficient_free(1) == doctest::Approx(2 * std::sqrt(2.0) / (kPi * kPi * kPi)));
  }

  TEST_CASE("census") {
    const Census one = ground_state_census(solve_1d(Potential1D::constant(0.0), 512, 5));
    REQUIRE(one.peaks.size() == 1);
    CHECK(one.peaks[0].x_peak == doctest::Approx(0.5));
    CHECK(one.peaks[0].pair == 1);

    // Two identical wells separated by a high barrier.
    const Potential1D wells{{0.0, 0.0, 3e4, 3e4, 0.0, 0.0}};
    const Census two = ground_state_census(solve_1d(wells, 1200, 6));
    REQUIRE(two.peaks.size() == 2);
    std::vector<int> pairs = {two.peaks[0].pair, two.peaks[1].pair};
    std::sort(pairs.begin(), pairs.end());
    CHECK(pairs == std::vector<int>{1, 2});
    CHECK(two.unmatched == 0);

    const Potential1D rough = Potential1D::seeded(2, 32, kPublishedVMin, kPublishedVMax);
    const Census c = ground_state_census(solve_1d(rough, 4096, 50));
    CHECK(c.peaks.size() >= 2);
    for (std::size_t i = 0; i + 1 < c.peaks.size(); ++i) CHECK(c.peaks[i].u_peak >= c.peaks[i + 1].u_peak);
    const int first = std::min<int>(3, static_cast<int>(c.peaks.size()));
    for (int i = 0; i < first; ++i) CHECK(c.peaks[i].distance <= 1.0 / 32);
  }

  TEST_CASE("data files") {
    const Potential1D V{{1.0, 2.0}};
    const Solution1D s = solve_1d(V, 40, 3);
    std::ostringstream pv, ev, fv;
    write_potential_dat(pv, V);
    CHECK(pv.str() == "# x V\n0 1\n0.5 1\n0.5 2\n1 2\n");
    write_envelope_dat(ev, s, {1, 3});
    CHECK(ev.str().rfind("# x u -u psi1 psi3\n", 0) == 0);
    write_fourier_dat(fv, s, {1, 3});
    std::istringstream is(fv.str());
    std::string line;
    int rows = 0;
    std::getline(is, line);
    CHECK(line == "# x u S1 S3");
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 41);
    CHECK_THROWS_AS(write_envelope_dat(ev, s, {4}), std::invalid_argument);
  }
}
