#pragma once

// Experiment catalog: reproducible problem descriptions with reference
// eigenvalues where they are known.

#include "lhp/problem.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace lhp {

struct ReferenceValue {
  int index;          // 1-based position in the spectrum
  double value;
  std::string label;  // e.g. "(1,2)" for analytically indexed values
};

struct ReferenceData {
  std::vector<ReferenceValue> values;  // ascending by value

  std::optional<double> at(int index) const;
  bool empty() const { return values.empty(); }
};

struct CatalogEntry {
  ProblemSpec spec;
  Mesh mesh;
  ReferenceData reference;
  int suggested_M = 20;
};

class UnknownProblem : public ProblemError {
 public:
  using ProblemError::ProblemError;
};

/// The catalog names, in listing order. `perforated` accepts `perforated:<m>`.
std::vector<std::string> catalog_names();

/// Throws UnknownProblem listing the catalog if `name` is not recognised.
CatalogEntry catalog(const std::string& name, std::uint64_t seed);

/// Source terms by name: "one" (f = 1) or "1-3x".
Polynomial2D source_by_name(const std::string& name);

/// Uniform [0, 1) double from a 64-bit Mersenne Twister draw (53-bit mantissa).
double uniform01(std::uint64_t draw);

/// JSON description: per subdomain its rectangles, A entries and V, plus the
/// source polynomial, penalty, seed and notes.
void write_problem_json(std::ostream& os, const ProblemSpec& spec);

/// Eigenvalues (m pi / a)^2 + (n pi / b)^2 of a rectangle, ascending, first `count`.
std::vector<ReferenceValue> rectangle_spectrum(double a, double b, int count);

}  // namespace lhp
