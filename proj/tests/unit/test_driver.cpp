#include "lhp/driver.hpp"

#include <doctest.h>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace lhp;

namespace {

RunConfig small(const std::string& problem = "unit_square") {
  RunConfig c;
  c.problem = problem;
  c.M = 5;
  c.tol = 0.0;
  c.n_max = 6;
  c.record_timings = false;
  return c;
}

std::string csv_of(const RunLog& log) {
  std::ostringstream os;
  write_csv(os, log);
  return os.str();
}

}  // namespace

TEST_SUITE("driver") {
  TEST_CASE("zero tolerance runs the full step budget") {
    const RunLog log = run(small());
    CHECK(log.terminal == "max-steps");
    REQUIRE(log.steps.size() == 6);
    for (std::size_t i = 1; i < log.steps.size(); ++i) CHECK(log.steps[i].dof > log.steps[i - 1].dof);
    CHECK(log.eigen_calls == 6);
  }

  TEST_CASE("pausing calls the eigensolver 1 + floor((n-1)/(l+1)) times on the same meshes") {
    const RunLog plain = run(small());
    for (int l : {1, 2, 4}) {
      RunConfig c = small();
      c.pause = l;
      const RunLog log = run(c);
      REQUIRE(log.steps.size() == plain.steps.size());
      CHECK(log.eigen_calls == 1 + (6 - 1) / (l + 1));
      for (std::size_t i = 0; i < log.steps.size(); ++i) {
        CHECK(log.steps[i].dof == plain.steps[i].dof);
        CHECK(log.steps[i].eigen_called == (i % (l + 1) == 0));
        CHECK(log.steps[i].lambda.empty() == !log.steps[i].eigen_called);
      }
    }
  }

  TEST_CASE("tolerance stop") {
    RunConfig c = small();
    c.tol = 1e-2;
    c.n_max = 60;
    const RunLog log = run(c);
    CHECK(log.stopped_by_tolerance());
    CHECK(log.steps.back().eta_max_rel < 1e-2);
    for (std::size_t i = 0; i + 1 < log.steps.size(); ++i) CHECK(log.steps[i].eta_max_rel >= 1e-2);
  }

  TEST_CASE("DOF limit") {
    RunConfig c = small();
    c.n_max = 50;
    c.max_dof = 900;
    const RunLog log = run(c);
    CHECK(log.terminal == "max-dof");
    for (const auto& s : log.steps) CHECK(s.dof <= 900);
  }

  TEST_CASE("strategies share the initial space") {
    RunState st;
    for (Strategy s : {Strategy::ER, Strategy::CRSum, Strategy::CRMax, Strategy::MR}) {
      RunConfig c = small("lshape");
      c.strategy = s;
      c.n_max = 2;
      const RunLog a = run(c, &st);
      const RunLog b = run(small("lshape"));
      CHECK(a.steps[0].dof == b.steps[0].dof);
      CHECK(a.steps[0].eta_land2 == b.steps[0].eta_land2);
      if (s != Strategy::ER) CHECK(a.steps[0].lambda == b.steps[0].lambda);
    }
    CHECK(st.pairs.size() == 5);
    CHECK(st.pairs_mesh.num_leaves() == st.mesh.num_leaves());
  }

  TEST_CASE("Picard switchover tracks the full solver") {
    RunConfig c = small("schrodinger_simple");
    c.tol = 1e-2;
    c.n_max = 60;
    const RunLog plain = run(c);
    c.picard = true;
    c.picard_threshold = 5;
    const RunLog pic = run(c);
    CHECK(pic.stopped_by_tolerance());
    CHECK(plain.stopped_by_tolerance());
    CHECK(pic.steps.size() == plain.steps.size());
    const auto& a = plain.steps.back().lambda;
    const auto& b = pic.steps.back().lambda;
    for (std::size_t j = 0; j < a.size(); ++j) CHECK(b[j] == doctest::Approx(a[j]).epsilon(1e-8));
  }

  TEST_CASE("configuration checks") {
    RunConfig c = small();
    c.strategy = Strategy::CRSum;
    c.pause = 1;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = small();
    c.tol = -1.0;
    CHECK_THROWS_AS(run(c), std::invalid_argument);
    c = small();
    c.adapt.r = 0.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    CHECK_THROWS(parse_strategy("XR"));
    CHECK(parse_strategy("LR-paused") == Strategy::LR);
    c = small();
    c.pause = 2;
    c.picard = true;
    CHECK(c.label() == "LR-pause2-picard30");
  }

  TEST_CASE("logs are byte-reproducible and well formed") {
    const RunLog a = run(small("lshape")), b = run(small("lshape"));
    const std::string csv = csv_of(a);
    CHECK(csv == csv_of(b));
    std::istringstream is(csv);
    std::string header;
    std::getline(is, header);
    CHECK(header.rfind("step,dof,eta_land2,eta_max_rel,", 0) == 0);
    CHECK(std::count(header.begin(), header.end(), ',') == 14 + 3 * 5 + 4);

    std::ostringstream js;
    write_jsonl(js, a);
    std::istringstream jl(js.str());
    std::string line;
    int steps = 0;
    nlohmann::json last;
    while (std::getline(jl, line)) {
      last = nlohmann::json::parse(line);
      if (last["type"] == "step") ++steps;
    }
    CHECK(steps == 6);
    CHECK(last["type"] == "summary");
    CHECK(last["terminal"] == "max-steps");
  }

  TEST_CASE("output directory layout") {
    const auto dir = std::filesystem::temp_directory_path() / "lhp_driver_test";
    std::filesystem::remove_all(dir);
    RunConfig c = small("perforated:3");
    c.n_max = 2;
    RunOutputs out{dir.string(), true};
    run(c, nullptr, out);
    for (const char* f : {"perforated-3_LR_1.csv", "perforated-3_LR_1.jsonl", "perforated-3_LR_1.problem.json",
                          "perforated-3_LR_1_step001.mesh", "perforated-3_LR_1_step001.landscape.ind",
                          "perforated-3_LR_1_step001.eigmax.ind", "perforated-3_LR_1_step001.plan",
                          "perforated-3_LR_1_step002.mesh", "perforated-3_LR_1_step002.eigmax.ind"})
      CHECK_MESSAGE(std::filesystem::exists(dir / f), f);
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("line fit") {
    const LinearFit f = fit_line({0, 1, 2, 3}, {1, -1, -3, -5});
    CHECK(f.slope == doctest::Approx(-2.0));
    CHECK(f.intercept == doctest::Approx(1.0));
    CHECK(f.r2 == doctest::Approx(1.0));
  }
}
