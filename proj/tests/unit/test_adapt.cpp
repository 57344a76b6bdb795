#include "lhp/adapt.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <sstream>

using namespace lhp;

TEST_SUITE("adapt") {
  TEST_CASE("top fraction with ties by id") {
    std::vector<double> eta(50, 1.0);
    eta[7] = 3.0;
    eta[40] = 2.0;
    const auto m = mark_top_fraction(eta, 10.0);
    REQUIRE(m.size() == 5);
    CHECK(m == std::vector<int>{7, 40, 0, 1, 2});
    CHECK(mark_top_fraction(eta, 1.0).size() == 1);
    CHECK(mark_top_fraction(eta, 100.0).size() == 50);
    CHECK_THROWS_AS(mark_top_fraction(eta, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(mark_top_fraction(eta, 100.5), std::invalid_argument);
  }

  TEST_CASE("smoothness split") {
    Mesh m(RootGrid::rectangle(0, 0, 1, 1, 3, 1), 2);
    m.set_order(2, 1);
    const DofMap d = DofMap::build(m);
    DiscreteField f{d, Eigen::VectorXd::Zero(d.dim())};
    f.coeffs[d.offset[0]] = 1.0;       // a single shell: measure 0, smooth
    f.coeffs.segment(d.offset[1], 9).setOnes();  // no decay: rough
    const RefinementPlan p = split_by_smoothness({0, 1, 2}, f, 0.25);
    CHECK(p.p_set == std::vector<int>{0});
    CHECK(p.h_set == std::vector<int>{1, 2});
  }

  TEST_CASE("local properties: order cap and order jump") {
    Mesh m(RootGrid::rectangle(0, 0, 1, 1, 4, 4), 2);
    m.set_order(5, 9);
    AdaptParams prm;
    prm.p_max = 9;
    AdaptReport rep;
    const Mesh r = enforce_local_properties({{0}, {5, 6}}, m, prm, &rep);
    CHECK(rep.capped == 1);
    int raised = 0;
    for (const Edge& e : r.edges())
      if (e.kind == Edge::Kind::Interior) CHECK(std::abs(r.order(e.k1) - r.order(e.k2)) <= prm.max_order_jump);
    for (int k = 0; k < static_cast<int>(r.num_leaves()); ++k) {
      CHECK(r.order(k) <= prm.p_max);
      if (r.order(k) > 2) ++raised;
    }
    CHECK(raised > 2);
    CHECK(r.num_leaves() == 19);
  }

  TEST_CASE("h-only mode splits p-marked elements") {
    Mesh m(RootGrid::rectangle(0, 0, 1, 1, 2, 2), 2);
    AdaptParams prm;
    prm.h_only = true;
    const Mesh r = enforce_local_properties({{}, {3}}, m, prm);
    CHECK(r.num_leaves() == 7);
    for (int k = 0; k < static_cast<int>(r.num_leaves()); ++k) CHECK(r.order(k) == 2);
  }

  TEST_CASE("plan dump") {
    std::ostringstream os;
    write_plan_dump(os, {{4}, {1, 9}});
    CHECK(os.str() == "plan v1\n1 p\n4 h\n9 p\n");
  }
}
