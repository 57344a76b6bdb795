#include "lhp/mesh.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <string>

using namespace lhp;

namespace {

double perimeter_covered(const std::vector<Edge>& edges, int k) {
  double s = 0.0;
  for (const Edge& e : edges)
    if (e.k1 == k || e.k2 == k) s += e.h;
  return s;
}

}  // namespace

TEST_SUITE("mesh") {
  TEST_CASE("root grid and refinement counts") {
    Mesh m(RootGrid::rectangle(0, 0, 1, 1, 8, 8), 2);
    CHECK(m.num_leaves() == 64);
    Mesh r = refine_elements(m, std::vector<int>{0});
    CHECK(r.num_leaves() == 67);
    CHECK(r.area() == doctest::Approx(1.0));
    CHECK(test::uniform(m).num_leaves() == 256);
  }

  TEST_CASE("masked grid drops hole cells") {
    const std::vector<Box> holes = {{0.0, 0.0, 1.0, 1.0}};
    const RootGrid g = masked_grid(-1, -1, 1, 1, 8, 8, holes);
    Mesh m(g, 2);
    CHECK(m.num_leaves() == 48);
    CHECK(m.area() == doctest::Approx(3.0));
  }

  TEST_CASE("random refinement keeps 1-irregularity and watertight edges") {
    std::mt19937_64 rng(3);
    Mesh m(RootGrid::rectangle(0, 0, 1, 1, 3, 2), 2);
    for (int round = 0; round < 12; ++round) {
      std::vector<int> marked;
      std::uniform_int_distribution<int> pick(0, static_cast<int>(m.num_leaves()) - 1);
      for (int i = 0; i < 3; ++i) marked.push_back(pick(rng));
      std::sort(marked.begin(), marked.end());
      marked.erase(std::unique(marked.begin(), marked.end()), marked.end());
      m = refine_elements(m, marked);
      REQUIRE(m.max_level_jump() <= 1);
    }
    CHECK(m.area() == doctest::Approx(1.0).epsilon(1e-13));
    const auto edges = m.edges();
    for (int k = 0; k < static_cast<int>(m.num_leaves()); ++k) {
      const Box b = m.box(k);
      CHECK(perimeter_covered(edges, k) == doctest::Approx(2 * (b.width() + b.height())).epsilon(1e-12));
    }
    for (const Edge& e : edges) {
      CHECK(std::hypot(e.n1[0], e.n1[1]) == doctest::Approx(1.0));
      if (e.kind == Edge::Kind::Interior) CHECK(m.level(e.k1) >= m.level(e.k2));
    }
  }

  TEST_CASE("ancestor map") {
    Mesh c(RootGrid::rectangle(0, 0, 1, 1, 2, 2), 2);
    Mesh f = refine_elements(c, std::vector<int>{3});
    const auto anc = ancestor_leaves(c, f);
    REQUIRE(anc.size() == f.num_leaves());
    for (std::size_t k = 0; k < anc.size(); ++k) {
      const Box bf = f.box(static_cast<int>(k)), bc = c.box(anc[k]);
      CHECK(bf.x0 >= bc.x0);
      CHECK(bf.x1 <= bc.x1);
    }
    CHECK_THROWS_AS(ancestor_leaves(f, c), MeshError);
  }

  TEST_CASE("refined leaves inherit order and subdomain") {
    Mesh m(RootGrid::rectangle(0, 0, 1, 1, 2, 2), 3);
    m.set_subdomain(1, 1);
    m.set_order(1, 5);
    Mesh r = refine_elements(m, std::vector<int>{1});
    int children = 0;
    for (int k = 0; k < static_cast<int>(r.num_leaves()); ++k)
      if (r.level(k) == 1) {
        ++children;
        CHECK(r.order(k) == 5);
        CHECK(r.subdomain(k) == 1);
      }
    CHECK(children == 4);
  }

  TEST_CASE("dump format") {
    Mesh m(RootGrid::rectangle(0, 0, 1, 1, 2, 1), 2);
    std::ostringstream os;
    write_mesh_dump(os, m);
    std::istringstream is(os.str());
    std::string tag, version;
    int n = 0;
    is >> tag >> version >> n;
    CHECK(tag == "mesh");
    CHECK(n == 2);
  }
}
