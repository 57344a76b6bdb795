#pragma once

// Local regularity from the decay of modal Legendre coefficients.

#include "lhp/field.hpp"

#include <optional>
#include <vector>

namespace lhp {

/// m = exp(-sigma) in [0, 1] where sigma is the least-squares decay rate of
/// log a_k, a_k = sqrt(sum over max(a,b) = k of c_ab^2). Larger is rougher.
/// Coefficients below 1e-14 of the largest are ignored; a field with fewer
/// than two significant a_k measures 0. Undefined (nullopt) for p < 2.
std::optional<double> regularity(Eigen::Ref<const Eigen::VectorXd> block, int p);

inline std::optional<double> regularity(const DiscreteField& f, int k) { return regularity(f.block(k), f.dofs.order[k]); }

/// Per-element measures; elements with p < 2 report -1.
std::vector<double> regularity_field(const DiscreteField& f);

}  // namespace lhp
