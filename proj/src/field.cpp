#include "lhp/field.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace lhp {

DofMap DofMap::build(const Mesh& mesh) {
  DofMap d;
  const int n = static_cast<int>(mesh.num_leaves());
  d.offset.resize(n + 1);
  d.order.resize(n);
  d.offset[0] = 0;
  for (int k = 0; k < n; ++k) {
    d.order[k] = mesh.order(k);
    d.offset[k + 1] = d.offset[k] + modes(d.order[k]);
  }
  return d;
}

TraceTable element_table(const Box& b, int p, std::span<const std::array<double, 2>> points) {
  const auto n = static_cast<Eigen::Index>(points.size());
  const int m = modes(p);
  TraceTable t;
  t.val.resize(n, m);
  t.dx.resize(n, m);
  t.dy.resize(n, m);
  const double sx = 2.0 / b.width();
  const double sy = 2.0 / b.height();
  for (Eigen::Index q = 0; q < n; ++q) {
    const auto r = to_reference(b, points[q][0], points[q][1]);
    const auto lx = legendre(p, r[0]);
    const auto ly = legendre(p, r[1]);
    for (int a = 0; a <= p; ++a)
      for (int c = 0; c <= p; ++c) {
        const int i = mode_index(p, a, c);
        t.val(q, i) = lx.value[a] * ly.value[c];
        t.dx(q, i) = sx * lx.d1[a] * ly.value[c];
        t.dy(q, i) = sy * lx.value[a] * ly.d1[c];
      }
  }
  return t;
}

namespace {

struct RefCacheEntry {
  QuadratureRule rule;
  BasisTable table;
};

const RefCacheEntry& reference_cache(int p, int n) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<RefCacheEntry>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{p, n}];
  if (!slot) {
    slot = std::make_unique<RefCacheEntry>();
    const auto& g = gauss_rule(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        slot->rule.nodes.push_back({g.nodes[i], g.nodes[j]});
        slot->rule.weights.push_back(g.weights[i] * g.weights[j]);
      }
    slot->rule.exactness = 2 * n - 1;
    slot->table = eval_basis(p, slot->rule.nodes, 2);
  }
  return *slot;
}

}  // namespace

ElementQuadrature element_quadrature(const Box& b, int p, int n) {
  const RefCacheEntry& ref = reference_cache(p, n);
  ElementQuadrature q;
  const double jac = 0.25 * b.area();
  q.points.reserve(ref.rule.nodes.size());
  q.weights.resize(static_cast<Eigen::Index>(ref.rule.nodes.size()));
  for (std::size_t i = 0; i < ref.rule.nodes.size(); ++i) {
    const auto& r = ref.rule.nodes[i];
    q.points.push_back({b.cx() + 0.5 * b.width() * r[0], b.cy() + 0.5 * b.height() * r[1]});
    q.weights[static_cast<Eigen::Index>(i)] = jac * ref.rule.weights[i];
  }
  q.ref = &ref.table;
  q.sx = 2.0 / b.width();
  q.sy = 2.0 / b.height();
  return q;
}

EdgeQuadrature edge_quadrature(const Edge& e, int n) {
  const auto& g = gauss_rule(n);
  EdgeQuadrature q;
  q.points.reserve(n);
  q.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    const double t = 0.5 * (g.nodes[i] + 1.0);
    q.points.push_back({e.a[0] + t * (e.b[0] - e.a[0]), e.a[1] + t * (e.b[1] - e.a[1])});
    q.weights[i] = 0.5 * e.h * g.weights[i];
  }
  return q;
}

int locate_leaf(const Mesh& mesh, double x, double y) {
  const RootGrid& g = mesh.grid();
  auto root_index = [](double v, double origin, double h, int n) {
    const double t = (v - origin) / h;
    if (t < 0.0 || t > n) return -1L;
    return std::min(static_cast<long>(std::floor(t)), static_cast<long>(n - 1));
  };
  const long i = root_index(x, g.x0, g.hx, g.nx);
  const long j = root_index(y, g.y0, g.hy, g.ny);
  if (i < 0 || j < 0 || !g.is_active(i, j)) return -1;
  int cell = mesh.find(0, i, j);
  const auto& cells = mesh.cells();
  while (!cells[cell].is_leaf()) {
    const Box b = mesh.box_of_cell(cell);
    const int q = (x >= b.cx() ? 1 : 0) + (y >= b.cy() ? 2 : 0);
    cell = cells[cell].children[q];
  }
  return mesh.leaf_of_cell(cell);
}

PointValue eval_on_element(const Mesh& mesh, const DiscreteField& f, int k, double x, double y) {
  const Box b = mesh.box(k);
  const int p = f.dofs.order[k];
  const auto r = to_reference(b, x, y);
  const auto lx = legendre(p, r[0]);
  const auto ly = legendre(p, r[1]);
  const auto c = f.block(k);
  PointValue out;
  for (int a = 0; a <= p; ++a)
    for (int d = 0; d <= p; ++d) {
      const double ci = c[mode_index(p, a, d)];
      out.u += ci * lx.value[a] * ly.value[d];
      out.ux += ci * lx.d1[a] * ly.value[d];
      out.uy += ci * lx.value[a] * ly.d1[d];
    }
  out.ux *= 2.0 / b.width();
  out.uy *= 2.0 / b.height();
  return out;
}

double eval_field(const Mesh& mesh, const DiscreteField& f, double x, double y) {
  const int k = locate_leaf(mesh, x, y);
  return k < 0 ? 0.0 : eval_on_element(mesh, f, k, x, y).u;
}

Eigen::MatrixXd prolongate(const Mesh& coarse, const DofMap& coarse_dofs, const Eigen::MatrixXd& C,
                           const Mesh& fine) {
  const std::vector<int> anc = ancestor_leaves(coarse, fine);
  const DofMap dofs = DofMap::build(fine);
  const auto ncol = C.cols();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dofs.dim(), ncol);
  for (int k = 0; k < static_cast<int>(fine.num_leaves()); ++k) {
    const int K = anc[k];
    const int pc = coarse_dofs.order[K];
    const int pf = dofs.order[k];
    const Box bc = coarse.box(K);
    const Box bf = fine.box(k);
    const double scx = bf.width() / bc.width();
    const double scy = bf.height() / bc.height();
    const double shx = (bf.cx() - bc.cx()) / (0.5 * bc.width());
    const double shy = (bf.cy() - bc.cy()) / (0.5 * bc.height());
    const Eigen::MatrixXd tx = transfer_1d(pc, pf, scx, shx);
    const Eigen::MatrixXd ty = transfer_1d(pc, pf, scy, shy);
    // Coefficient layout per element is row-major in (a, b): index a*(p+1)+b.
    Eigen::MatrixXd cc(pc + 1, pc + 1);
    for (Eigen::Index col = 0; col < ncol; ++col) {
      const auto blk = C.col(col).segment(coarse_dofs.offset[K], coarse_dofs.size(K));
      for (int a = 0; a <= pc; ++a)
        for (int b = 0; b <= pc; ++b) cc(a, b) = blk[mode_index(pc, a, b)];
      const Eigen::MatrixXd cf = tx * cc * ty.transpose();
      auto dst = out.col(col).segment(dofs.offset[k], dofs.size(k));
      for (int a = 0; a <= pf; ++a)
        for (int b = 0; b <= pf; ++b) dst[mode_index(pf, a, b)] = cf(a, b);
    }
  }
  return out;
}

DiscreteField prolongate(const Mesh& coarse, const DiscreteField& f, const Mesh& fine) {
  DiscreteField out;
  out.dofs = DofMap::build(fine);
  out.coeffs = prolongate(coarse, f.dofs, Eigen::MatrixXd(f.coeffs), fine).col(0);
  return out;
}

void normalize_sign(Eigen::Ref<Eigen::VectorXd> v) {
  if (v.size() == 0) return;
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  if (v[imax] < 0.0) v = -v;
}

}  // namespace lhp
