#include "lhp/smoothness.hpp"

#include <algorithm>
#include <cmath>

namespace lhp {

std::optional<double> regularity(Eigen::Ref<const Eigen::VectorXd> block, int p) {
  if (p < 2) return std::nullopt;
  std::vector<double> a(p + 1, 0.0);
  for (int i = 0; i <= p; ++i)
    for (int j = 0; j <= p; ++j) a[std::max(i, j)] += block[mode_index(p, i, j)] * block[mode_index(p, i, j)];
  double amax = 0.0;
  for (double& v : a) {
    v = std::sqrt(v);
    amax = std::max(amax, v);
  }
  if (amax == 0.0) return 0.0;
  double sk = 0.0, sy = 0.0, skk = 0.0, sky = 0.0;
  int n = 0;
  for (int k = 0; k <= p; ++k) {
    if (a[k] < 1e-14 * amax) continue;
    const double y = std::log(a[k]);
    sk += k;
    sy += y;
    skk += static_cast<double>(k) * k;
    sky += k * y;
    ++n;
  }
  if (n < 2) return 0.0;
  const double slope = (n * sky - sk * sy) / (n * skk - sk * sk);
  return std::clamp(std::exp(slope), 0.0, 1.0);
}

std::vector<double> regularity_field(const DiscreteField& f) {
  std::vector<double> m(f.dofs.num_elements());
  for (int k = 0; k < f.dofs.num_elements(); ++k) m[k] = regularity(f, k).value_or(-1.0);
  return m;
}

}  // namespace lhp
