#include "lhp/problems.hpp"

#include <doctest.h>

#include <numbers>
#include <sstream>

using namespace lhp;

namespace {
constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

std::string json_of(const std::string& name, std::uint64_t seed) {
  std::ostringstream os;
  write_problem_json(os, catalog(name, seed).spec);
  return os.str();
}
}  // namespace

TEST_SUITE("problems") {
  TEST_CASE("catalog listing and rejection") {
    CHECK(catalog_names().size() == 7);
    CHECK_THROWS_AS(catalog("square", 1), UnknownProblem);
    CHECK_THROWS_AS(catalog("perforated:0", 1), UnknownProblem);
  }

  TEST_CASE("every entry is well posed and aligned") {
    for (const auto& name : catalog_names()) {
      const CatalogEntry e = catalog(name, 5);
      CHECK_NOTHROW(e.spec.validate());
      CHECK_NOTHROW(check_alignment(e.mesh, e.spec));
      for (const auto& sd : e.spec.subdomains) {
        CHECK(sd.V >= 0.0);
        CHECK(sd.A.is_spd());
      }
      for (std::size_t i = 1; i < e.reference.values.size(); ++i)
        CHECK(e.reference.values[i - 1].value <= e.reference.values[i].value);
    }
  }

  TEST_CASE("reference values") {
    const CatalogEntry sq = catalog("unit_square", 1);
    CHECK(*sq.reference.at(1) == doctest::Approx(2 * kPi2));
    CHECK(*sq.reference.at(2) == doctest::Approx(5 * kPi2));
    CHECK(*sq.reference.at(3) == doctest::Approx(5 * kPi2));
    CHECK(sq.mesh.num_leaves() == 64);

    const CatalogEntry l = catalog("lshape", 1);
    CHECK(*l.reference.at(1) == doctest::Approx(9.639723844).epsilon(1e-10));
    CHECK(*l.reference.at(3) == doctest::Approx(2 * kPi2).epsilon(1e-9));
    CHECK(l.mesh.area() == doctest::Approx(3.0));

    const CatalogEntry p = catalog("perforated", 1);
    CHECK(*p.reference.at(41) == doctest::Approx(967.22123).epsilon(1e-8));
    CHECK(p.mesh.area() == doctest::Approx(1.0 - 9.0 / 49.0));
  }

  TEST_CASE("seeded entries are reproducible") {
    CHECK(json_of("schrodinger_rough", 3) == json_of("schrodinger_rough", 3));
    CHECK(json_of("schrodinger_rough", 3) != json_of("schrodinger_rough", 4));
    const CatalogEntry r = catalog("schrodinger_rough", 3);
    CHECK(r.mesh.num_leaves() == 400);
    double vmax = 0.0;
    for (const auto& sd : r.spec.subdomains) vmax = std::max(vmax, sd.V);
    CHECK(vmax <= 8000.0);
    CHECK(vmax > 7000.0);
  }

  TEST_CASE("sources and spectra") {
    CHECK(source_by_name("1-3x")(0.5, 0.2) == doctest::Approx(-0.5));
    CHECK_THROWS(source_by_name("x^2"));
    const auto s = rectangle_spectrum(1.0, 2.0, 3);
    CHECK(s[0].value == doctest::Approx(kPi2 * 1.25));
    CHECK(s[1].value == doctest::Approx(kPi2 * 2.0));
    CHECK(uniform01(~0ULL) < 1.0);
  }
}
