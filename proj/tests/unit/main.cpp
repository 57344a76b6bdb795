#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include "lhp/runtime.hpp"

int main(int argc, char** argv) {
  lhp::pin_blas_kernel(argv);
  doctest::Context ctx(argc, argv);
  return ctx.run();
}
