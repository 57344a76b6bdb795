#include "lhp/smoothness.hpp"

#include <doctest.h>

#include <cmath>

using namespace lhp;

namespace {

// Block whose shell norms a_k = sqrt(sum over max(a,b)=k of c_ab^2) equal g(k).
template <class G>
Eigen::VectorXd shells(int p, G g) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(modes(p));
  for (int k = 0; k <= p; ++k) {
    const int count = 2 * k + 1;
    for (int a = 0; a <= p; ++a)
      for (int b = 0; b <= p; ++b)
        if (std::max(a, b) == k) c[mode_index(p, a, b)] = g(k) / std::sqrt(count);
  }
  return c;
}

}  // namespace

TEST_SUITE("smoothness") {
  TEST_CASE("geometric decay measures its ratio") {
    for (int p : {2, 4, 7})
      for (double q : {0.05, 0.3, 0.8}) {
        const auto m = regularity(shells(p, [q](int k) { return std::pow(q, k); }), p);
        REQUIRE(m.has_value());
        CHECK(*m == doctest::Approx(q).epsilon(1e-12));
      }
  }

  TEST_CASE("least-squares rate for non-geometric decay") {
    // log a_k = -k^2: slope of the fit over k = 0..3 is -3.
    const auto m = regularity(shells(3, [](int k) { return std::exp(-double(k * k)); }), 3);
    CHECK(*m == doctest::Approx(std::exp(-3.0)).epsilon(1e-12));
  }

  TEST_CASE("growth is clamped to one") {
    CHECK(*regularity(shells(3, [](int k) { return std::pow(2.0, k); }), 3) == 1.0);
  }

  TEST_CASE("negligible shells are ignored") {
    const auto m = regularity(shells(5, [](int k) { return k <= 2 ? std::pow(0.2, k) : 1e-18; }), 5);
    CHECK(*m == doctest::Approx(0.2).epsilon(1e-12));
  }

  TEST_CASE("degenerate inputs") {
    CHECK(*regularity(Eigen::VectorXd::Zero(modes(3)), 3) == 0.0);
    CHECK(*regularity(shells(3, [](int k) { return k == 0 ? 1.0 : 0.0; }), 3) == 0.0);
    CHECK_FALSE(regularity(Eigen::VectorXd::Ones(modes(1)), 1).has_value());
  }

  TEST_CASE("field of measures") {
    Mesh m(RootGrid::rectangle(0, 0, 1, 1, 2, 1), 2);
    m.set_order(1, 1);
    const DofMap d = DofMap::build(m);
    DiscreteField f{d, Eigen::VectorXd::Zero(d.dim())};
    f.coeffs.head(9) = shells(2, [](int k) { return std::pow(0.5, k); });
    const auto r = regularity_field(f);
    CHECK(r[0] == doctest::Approx(0.5));
    CHECK(r[1] == -1.0);
  }
}
