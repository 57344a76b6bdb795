#include "lhp/estimators.hpp"

#include "edge_kernel.hpp"

#include <iomanip>
#include <ostream>

namespace lhp {

double IndicatorField::total() const {
  double s = 0.0;
  for (double v : eta2) s += v;
  return s;
}

namespace {

// Shared evaluation for c fields at once. With `source` set, the residual is
// f + div(A grad u) - V u; otherwise lambda_j u + div(A grad u) - V u.
std::vector<std::vector<double>> indicators(const Mesh& mesh, const ProblemSpec& spec, const DofMap& dofs,
                                            const Eigen::MatrixXd& C, const Eigen::VectorXd& lambda,
                                            const Polynomial2D* source, const EstimatorOptions& opt) {
  const int nel = dofs.num_elements();
  const auto c = static_cast<int>(C.cols());
  std::vector<std::vector<double>> eta(c, std::vector<double>(nel, 0.0));
  const int fdeg = source ? source->degree() : 0;

  for (int k = 0; k < nel; ++k) {
    const int p = dofs.order[k];
    const Box b = mesh.box(k);
    const ElementQuadrature q = element_quadrature(b, p, std::max(p, fdeg) + 2);
    const BasisTable& t = *q.ref;
    const Subdomain& sd = spec.on_leaf(mesh, k);
    const auto Ck = C.middleRows(dofs.offset[k], dofs.size(k));
    const Eigen::MatrixXd U = t.values * Ck;
    Eigen::MatrixXd R = (sd.A.xx * q.sx * q.sx) * (t.dxx * Ck) + (2.0 * sd.A.xy * q.sx * q.sy) * (t.dxy * Ck) +
                        (sd.A.yy * q.sy * q.sy) * (t.dyy * Ck) - sd.V * U;
    if (source) {
      for (Eigen::Index i = 0; i < R.rows(); ++i) R.row(i).array() += (*source)(q.points[i][0], q.points[i][1]);
    } else {
      R += U * lambda.asDiagonal();
    }
    const double h = b.diameter();
    const double w = h * h / (sd.A.lambda_min() * p * p);
    const Eigen::VectorXd r2 = R.cwiseAbs2().transpose() * q.weights;
    for (int j = 0; j < c; ++j) eta[j][k] += w * r2[j];
  }

  for (const Edge& e : mesh.edges()) {
    const detail::EdgeData d = detail::tabulate_edge(mesh, spec, e);
    const double pe = d.pe;
    const auto C1 = C.middleRows(dofs.offset[d.s1.k], dofs.size(d.s1.k));
    if (!d.interior) {
      const double amin = d.s1.coef->A.lambda_min();
      const double amax = d.s1.coef->A.lambda_max();
      double wj = spec.gamma * spec.gamma * amax * pe * pe * pe / e.h;
      if (!opt.reduced_jump) wj += e.h / (amin * pe);
      const Eigen::VectorXd j2 = (d.s1.t.val * C1).cwiseAbs2().transpose() * d.quad.weights;
      for (int j = 0; j < c; ++j) eta[j][d.s1.k] += wj * j2[j];
      continue;
    }
    const auto C2 = C.middleRows(dofs.offset[d.s2.k], dofs.size(d.s2.k));
    const double amin = std::min(d.s1.coef->A.lambda_min(), d.s2.coef->A.lambda_min());
    const double amax = std::max(d.s1.coef->A.lambda_max(), d.s2.coef->A.lambda_max());
    const double wf = e.h / (amin * pe);
    double wj = spec.gamma * spec.gamma * amax * pe * pe * pe / e.h;
    if (!opt.reduced_jump) wj += e.h / (amin * pe);
    const Eigen::MatrixXd jump = d.s1.t.val * C1 - d.s2.t.val * C2;
    const Eigen::MatrixXd fjump = d.s1.flux * C1 - d.s2.flux * C2;
    const Eigen::VectorXd j2 = jump.cwiseAbs2().transpose() * d.quad.weights;
    const Eigen::VectorXd f2 = fjump.cwiseAbs2().transpose() * d.quad.weights;
    for (int j = 0; j < c; ++j) {
      const double half = 0.5 * (wf * f2[j] + wj * j2[j]);
      eta[j][d.s1.k] += half;
      eta[j][d.s2.k] += half;
    }
  }
  return eta;
}

}  // namespace

IndicatorField eta_landscape(const Mesh& mesh, const ProblemSpec& spec, const DiscreteField& u,
                             const EstimatorOptions& opt) {
  const Eigen::MatrixXd C = u.coeffs;
  auto eta = indicators(mesh, spec, u.dofs, C, Eigen::VectorXd::Zero(1), &spec.source, opt);
  return {"landscape", std::move(eta[0])};
}

IndicatorField eta_eigenpair(const Mesh& mesh, const ProblemSpec& spec, double lambda, const DiscreteField& phi,
                             const EstimatorOptions& opt) {
  const Eigen::MatrixXd C = phi.coeffs;
  auto eta = indicators(mesh, spec, phi.dofs, C, Eigen::VectorXd::Constant(1, lambda), nullptr, opt);
  return {"eig", std::move(eta[0])};
}

std::vector<IndicatorField> eta_eigenpairs(const Mesh& mesh, const ProblemSpec& spec, const Eigen::VectorXd& values,
                                           const Eigen::MatrixXd& vectors, const EstimatorOptions& opt) {
  const DofMap dofs = DofMap::build(mesh);
  auto eta = indicators(mesh, spec, dofs, vectors, values, nullptr, opt);
  std::vector<IndicatorField> out;
  out.reserve(eta.size());
  for (std::size_t j = 0; j < eta.size(); ++j) out.push_back({"eig" + std::to_string(j + 1), std::move(eta[j])});
  return out;
}

double dg_error(const Mesh& mesh, const DiscreteField& u, const Mesh& ref_mesh, const DiscreteField& ref,
                const ProblemSpec& spec) {
  DiscreteField diff = prolongate(mesh, u, ref_mesh);
  diff.coeffs -= ref.coeffs;
  return std::sqrt(std::max(0.0, dg_norm2(ref_mesh, spec, diff)));
}

void write_indicator_dump(std::ostream& os, const IndicatorField& f, const std::vector<double>* regularity) {
  os << "indicators v1 " << f.tag << ' ' << f.eta2.size() << '\n' << std::setprecision(17);
  for (std::size_t k = 0; k < f.eta2.size(); ++k) {
    os << k << ' ' << f.eta2[k];
    if (regularity) os << ' ' << (*regularity)[k];
    os << '\n';
  }
}

}  // namespace lhp
