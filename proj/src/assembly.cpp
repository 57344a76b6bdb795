#include "lhp/assembly.hpp"

#include "edge_kernel.hpp"

#include <algorithm>

namespace lhp {

namespace {

// Dense blocks of the lower triangle, grouped by column element.
class BlockAccumulator {
 public:
  explicit BlockAccumulator(const DofMap& dofs) : dofs_(dofs), cols_(dofs.num_elements()) {}

  void add(int row_elem, int col_elem, const Eigen::MatrixXd& b) {
    auto& list = cols_[col_elem];
    for (auto& [r, m] : list)
      if (r == row_elem) {
        m += b;
        return;
      }
    list.emplace_back(row_elem, b);
  }

  SparseMatrix build() {
    const int n = dofs_.dim();
    std::vector<int> outer(n + 1, 0);
    for (int s = 0; s < dofs_.num_elements(); ++s) {
      auto& list = cols_[s];
      std::sort(list.begin(), list.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
      for (int j = 0; j < dofs_.size(s); ++j) {
        int count = 0;
        for (const auto& [t, m] : list) count += t == s ? dofs_.size(s) - j : dofs_.size(t);
        outer[dofs_.offset[s] + j + 1] = count;
      }
    }
    for (int c = 0; c < n; ++c) outer[c + 1] += outer[c];
    SparseMatrix a(n, n);
    a.resizeNonZeros(outer[n]);
    std::copy(outer.begin(), outer.end(), a.outerIndexPtr());
    int* inner = a.innerIndexPtr();
    double* val = a.valuePtr();
    std::size_t pos = 0;
    for (int s = 0; s < dofs_.num_elements(); ++s)
      for (int j = 0; j < dofs_.size(s); ++j)
        for (const auto& [t, m] : cols_[s])
          for (int i = t == s ? j : 0; i < dofs_.size(t); ++i) {
            inner[pos] = dofs_.offset[t] + i;
            val[pos] = m(i, j);
            ++pos;
          }
    return a;
  }

 private:
  const DofMap& dofs_;
  std::vector<std::vector<std::pair<int, Eigen::MatrixXd>>> cols_;
};

Eigen::MatrixXd volume_block(const Box& b, int p, const Subdomain& sd) {
  const Reference1D& ref = reference_1d();
  const double hx = b.width();
  const double hy = b.height();
  const int m = modes(p);
  const Diffusion& A = sd.A;
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(m, m);
  for (int a = 0; a <= p; ++a)
    for (int bb = 0; bb <= p; ++bb) {
      const int i = mode_index(p, a, bb);
      for (int c = 0; c <= p; ++c)
        for (int d = 0; d <= p; ++d) {
          const int j = mode_index(p, c, d);
          double v = 0.0;
          if (bb == d) v += A.xx * (hy / hx) * ref.stiffness(a, c);
          if (a == c) v += A.yy * (hx / hy) * ref.stiffness(bb, d);
          if (A.xy != 0.0)
            v += A.xy * (ref.gradient(a, c) * ref.gradient(d, bb) + ref.gradient(c, a) * ref.gradient(bb, d));
          if (i == j) v += sd.V * 0.25 * hx * hy;
          k(i, j) = v;
        }
    }
  return 0.5 * (k + k.transpose());
}

}  // namespace

AverageWeights average_weights(const Diffusion& A1, const Diffusion& A2, const std::array<double, 2>& n) {
  const double a1 = A1.normal(n);
  const double a2 = A2.normal(n);
  return {a2 / (a1 + a2), a1 / (a1 + a2), 2.0 * a1 * a2 / (a1 + a2)};
}

SymmetricMatrix assemble_stiffness(const Mesh& mesh, const ProblemSpec& spec, AssemblyTerms terms) {
  check_alignment(mesh, spec);
  const DofMap dofs = DofMap::build(mesh);
  BlockAccumulator acc(dofs);
  const int n = dofs.num_elements();
  for (int k = 0; k < n; ++k) {
    const int m = dofs.size(k);
    if (terms.volume)
      acc.add(k, k, volume_block(mesh.box(k), dofs.order[k], spec.on_leaf(mesh, k)));
    else
      acc.add(k, k, Eigen::MatrixXd::Zero(m, m));
  }
  for (const Edge& e : mesh.edges()) {
    const detail::EdgeData d = detail::tabulate_edge(mesh, spec, e);
    const auto& W = d.quad.weights.asDiagonal();
    if (!d.interior) {
      const auto& s = d.s1;
      const double c = s.coef->A.normal(e.n1);
      const double pen = spec.gamma * c * d.pe * d.pe / e.h;
      Eigen::MatrixXd b = Eigen::MatrixXd::Zero(s.t.val.cols(), s.t.val.cols());
      if (terms.consistency) {
        const Eigen::MatrixXd vf = s.t.val.transpose() * W * s.flux;
        b -= vf + vf.transpose();
      }
      if (terms.penalty) b += pen * (s.t.val.transpose() * W * s.t.val);
      acc.add(s.k, s.k, 0.5 * (b + b.transpose()));
      continue;
    }
    const AverageWeights aw = average_weights(d.s1.coef->A, d.s2.coef->A, e.n1);
    const double pen = spec.gamma * aw.c * d.pe * d.pe / e.h;
    const std::array<const detail::EdgeSide*, 2> side{&d.s1, &d.s2};
    const std::array<double, 2> sigma{1.0, -1.0};
    const std::array<double, 2> omega{aw.w1, aw.w2};
    // Block (t, s): row test functions on side t, columns trial functions on side s.
    auto block = [&](int t, int s) {
      const auto& T = *side[t];
      const auto& S = *side[s];
      Eigen::MatrixXd b = Eigen::MatrixXd::Zero(T.t.val.cols(), S.t.val.cols());
      if (terms.consistency) {
        b -= sigma[t] * omega[s] * (T.t.val.transpose() * W * S.flux);
        b -= sigma[s] * omega[t] * (T.flux.transpose() * W * S.t.val);
      }
      if (terms.penalty) b += pen * sigma[t] * sigma[s] * (T.t.val.transpose() * W * S.t.val);
      return b;
    };
    const Eigen::MatrixXd b11 = block(0, 0);
    const Eigen::MatrixXd b22 = block(1, 1);
    acc.add(d.s1.k, d.s1.k, 0.5 * (b11 + b11.transpose()));
    acc.add(d.s2.k, d.s2.k, 0.5 * (b22 + b22.transpose()));
    if (d.s1.k > d.s2.k)
      acc.add(d.s1.k, d.s2.k, block(0, 1));
    else
      acc.add(d.s2.k, d.s1.k, block(1, 0));
  }
  return {acc.build()};
}

Eigen::VectorXd assemble_mass(const Mesh& mesh) {
  const DofMap dofs = DofMap::build(mesh);
  Eigen::VectorXd m(dofs.dim());
  for (int k = 0; k < dofs.num_elements(); ++k) m.segment(dofs.offset[k], dofs.size(k)).setConstant(0.25 * mesh.box(k).area());
  return m;
}

Eigen::VectorXd assemble_source(const Mesh& mesh, const Polynomial2D& f) {
  const DofMap dofs = DofMap::build(mesh);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(dofs.dim());
  if (f.is_zero()) return b;
  for (int k = 0; k < dofs.num_elements(); ++k) {
    const int p = dofs.order[k];
    const ElementQuadrature q = element_quadrature(mesh.box(k), p, std::max(p, f.degree()) + 2);
    Eigen::VectorXd fw(q.weights.size());
    for (Eigen::Index i = 0; i < fw.size(); ++i) fw[i] = q.weights[i] * f(q.points[i][0], q.points[i][1]);
    b.segment(dofs.offset[k], dofs.size(k)) = q.ref->values.transpose() * fw;
  }
  return b;
}

double penalty_seminorm2(const Mesh& mesh, const ProblemSpec& spec, const DiscreteField& u) {
  double s = 0.0;
  for (const Edge& e : mesh.edges()) {
    const detail::EdgeData d = detail::tabulate_edge(mesh, spec, e);
    Eigen::VectorXd jump = d.s1.t.val * u.block(d.s1.k);
    double c;
    if (d.interior) {
      jump -= d.s2.t.val * u.block(d.s2.k);
      c = average_weights(d.s1.coef->A, d.s2.coef->A, e.n1).c;
    } else {
      c = d.s1.coef->A.normal(e.n1);
    }
    s += spec.gamma * c * d.pe * d.pe / e.h * d.quad.weights.dot(jump.cwiseAbs2());
  }
  return s;
}

double dg_norm2(const Mesh& mesh, const ProblemSpec& spec, const DiscreteField& u) {
  double s = 0.0;
  for (int k = 0; k < static_cast<int>(mesh.num_leaves()); ++k) {
    const int p = u.dofs.order[k];
    const ElementQuadrature q = element_quadrature(mesh.box(k), p, p + 2);
    const auto c = u.block(k);
    const Eigen::VectorXd v = q.ref->values * c;
    const Eigen::VectorXd gx = q.sx * (q.ref->dx * c);
    const Eigen::VectorXd gy = q.sy * (q.ref->dy * c);
    const Subdomain& sd = spec.on_leaf(mesh, k);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const auto ag = sd.A.apply(gx[i], gy[i]);
      s += q.weights[i] * (ag[0] * gx[i] + ag[1] * gy[i] + sd.V * v[i] * v[i]);
    }
  }
  return s + penalty_seminorm2(mesh, spec, u);
}

}  // namespace lhp
