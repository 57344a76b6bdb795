#include "lhp/basis.hpp"

#include <cmath>
#include <numbers>

namespace lhp {

namespace {

constexpr int kMaxGaussPoints = 40;

GaussRule1D compute_gauss(int n) {
  GaussRule1D rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 1; k < n; ++k) {
        const double p2 = ((2 * k + 1) * x * p1 - k * p0) / (k + 1);
        p0 = p1;
        p1 = p2;
      }
      const double pn = n == 0 ? 1.0 : p1;
      dp = n * (x * pn - p0) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (int k = 1; k < n; ++k) {
      const double p2 = ((2 * k + 1) * x * p1 - k * p0) / (k + 1);
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace

const GaussRule1D& gauss_rule(int n) {
  static const std::vector<GaussRule1D> rules = [] {
    std::vector<GaussRule1D> r(kMaxGaussPoints + 1);
    for (int k = 1; k <= kMaxGaussPoints; ++k) r[k] = compute_gauss(k);
    return r;
  }();
  if (n < 1 || n > kMaxGaussPoints) throw std::out_of_range("gauss_rule: unsupported point count");
  return rules[n];
}

QuadratureRule element_rule(int p_max) {
  if (p_max < 1) throw std::invalid_argument("element_rule: p_max must be >= 1");
  const auto& g = gauss_rule(p_max + 2);
  QuadratureRule rule;
  rule.exactness = 2 * p_max + 3;
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    for (std::size_t j = 0; j < g.nodes.size(); ++j) {
      rule.nodes.push_back({g.nodes[i], g.nodes[j]});
      rule.weights.push_back(g.weights[i] * g.weights[j]);
    }
  return rule;
}

Legendre1D legendre(int p, double x) {
  Legendre1D out;
  std::array<double, kMaxOrder + 1> P{}, dP{}, d2P{};
  P[0] = 1.0;
  if (p >= 1) {
    P[1] = x;
    dP[1] = 1.0;
  }
  for (int k = 1; k < p; ++k) {
    P[k + 1] = ((2 * k + 1) * x * P[k] - k * P[k - 1]) / (k + 1);
    dP[k + 1] = dP[k - 1] + (2 * k + 1) * P[k];
    d2P[k + 1] = d2P[k - 1] + (2 * k + 1) * dP[k];
  }
  for (int k = 0; k <= p; ++k) {
    const double s = std::sqrt((2.0 * k + 1.0) / 2.0);
    out.value[k] = s * P[k];
    out.d1[k] = s * dP[k];
    out.d2[k] = s * d2P[k];
  }
  return out;
}

BasisTable eval_basis(int p, std::span<const std::array<double, 2>> points, int deriv) {
  if (deriv < 0 || deriv > 2) throw UnsupportedDerivative("eval_basis: derivative order must be 0, 1 or 2");
  if (p < 0 || p > kMaxOrder) throw std::out_of_range("eval_basis: order out of range");
  const auto n = static_cast<Eigen::Index>(points.size());
  const int dim = modes(p);
  BasisTable t;
  t.values.resize(n, dim);
  if (deriv >= 1) {
    t.dx.resize(n, dim);
    t.dy.resize(n, dim);
  }
  if (deriv == 2) {
    t.dxx.resize(n, dim);
    t.dxy.resize(n, dim);
    t.dyy.resize(n, dim);
  }
  for (Eigen::Index q = 0; q < n; ++q) {
    const auto lx = legendre(p, points[q][0]);
    const auto ly = legendre(p, points[q][1]);
    for (int a = 0; a <= p; ++a)
      for (int b = 0; b <= p; ++b) {
        const int i = mode_index(p, a, b);
        t.values(q, i) = lx.value[a] * ly.value[b];
        if (deriv >= 1) {
          t.dx(q, i) = lx.d1[a] * ly.value[b];
          t.dy(q, i) = lx.value[a] * ly.d1[b];
        }
        if (deriv == 2) {
          t.dxx(q, i) = lx.d2[a] * ly.value[b];
          t.dxy(q, i) = lx.d1[a] * ly.d1[b];
          t.dyy(q, i) = lx.value[a] * ly.d2[b];
        }
      }
  }
  return t;
}

const Reference1D& reference_1d() {
  static const Reference1D ref = [] {
    Reference1D r;
    const int n = kMaxOrder + 1;
    r.stiffness = Eigen::MatrixXd::Zero(n, n);
    r.gradient = Eigen::MatrixXd::Zero(n, n);
    const auto& g = gauss_rule(kMaxOrder + 2);
    for (std::size_t q = 0; q < g.nodes.size(); ++q) {
      const auto l = legendre(kMaxOrder, g.nodes[q]);
      for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c) {
          r.stiffness(a, c) += g.weights[q] * l.d1[a] * l.d1[c];
          r.gradient(a, c) += g.weights[q] * l.d1[a] * l.value[c];
        }
    }
    // Exact symmetry of the stiffness table.
    r.stiffness = 0.5 * (r.stiffness + r.stiffness.transpose()).eval();
    return r;
  }();
  return ref;
}

Eigen::MatrixXd transfer_1d(int p_parent, int p_child, double scale, double shift) {
  if (p_child < p_parent) throw std::invalid_argument("transfer_1d: child order below parent order");
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(p_child + 1, p_parent + 1);
  const auto& g = gauss_rule(p_child + 2);
  for (std::size_t q = 0; q < g.nodes.size(); ++q) {
    const auto lc = legendre(p_child, g.nodes[q]);
    const auto lp = legendre(p_parent, scale * g.nodes[q] + shift);
    for (int a = 0; a <= p_child; ++a)
      for (int c = 0; c <= p_parent; ++c) t(a, c) += g.weights[q] * lc.value[a] * lp.value[c];
  }
  return t;
}

}  // namespace lhp
