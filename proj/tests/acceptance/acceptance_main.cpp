// Runs the acceptance criteria and prints one verdict line per criterion.
// Arguments: optional criterion ids (default: all); `--out DIR` keeps run logs.

#include "lhp/acceptance.hpp"
#include "lhp/runtime.hpp"

#include <cstdlib>
#include <iostream>
#include <string>

int main(int argc, char** argv) {
  lhp::pin_blas_kernel(argv);
  std::vector<int> ids;
  std::string out;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--out" && i + 1 < argc)
      out = argv[++i];
    else
      ids.push_back(std::atoi(a.c_str()));
  }
  if (ids.empty())
    for (int id = 1; id <= lhp::AcceptanceSuite::kCount; ++id) ids.push_back(id);

  lhp::AcceptanceSuite suite(out);
  const auto results = suite.run_all(ids, &std::cout);
  int failed = 0;
  for (const auto& r : results) failed += r.pass ? 0 : 1;
  std::cout << results.size() - failed << "/" << results.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
