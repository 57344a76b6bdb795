#include "lhp/lab1d.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>
#include <string>

namespace lhp::lab1d {

std::vector<double> Potential1D::breakpoints() const {
  std::vector<double> b(values.size() + 1);
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = static_cast<double>(i) / values.size();
  return b;
}

double Potential1D::operator()(double x) const {
  const int n = pieces();
  const int i = std::clamp(static_cast<int>(std::floor(x * n)), 0, n - 1);
  return values[i];
}

void Potential1D::validate() const {
  if (values.empty()) throw std::invalid_argument("potential needs at least one piece");
  for (double v : values)
    if (!(v >= 0.0)) throw std::invalid_argument("potential values must be >= 0");
}

Potential1D Potential1D::constant(double c, int pieces) { return {std::vector<double>(pieces, c)}; }

Potential1D Potential1D::seeded(std::uint64_t seed, int pieces, double lo, double hi) {
  std::mt19937_64 rng(seed);
  Potential1D V;
  for (int i = 0; i < pieces; ++i) {
    const double t = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    V.values.push_back(lo + (hi - lo) * t);
  }
  return V;
}

namespace {

// Interior nodes 1..n-1. Lumped mass h per node; the potential enters through
// its lumped nodal weight h (V_left + V_right) / 2.
struct Tridiagonal {
  Eigen::VectorXd diag, off;  // K / h
};

Tridiagonal operator_matrix(const Potential1D& V, int n) {
  V.validate();
  if (n < 2) throw ResolutionError("need at least two intervals");
  if (n % V.pieces() != 0) throw ResolutionError("interval count must be a multiple of the potential pieces");
  const double h = 1.0 / n;
  const int m = n - 1;
  Tridiagonal t{Eigen::VectorXd(m), Eigen::VectorXd::Constant(std::max(m - 1, 0), -1.0 / (h * h))};
  for (int i = 1; i <= m; ++i) {
    const double vl = V((i - 0.5) * h);
    const double vr = V((i + 0.5) * h);
    t.diag[i - 1] = 2.0 / (h * h) + 0.5 * (vl + vr);
  }
  return t;
}

Eigen::VectorXd thomas(const Tridiagonal& t, Eigen::VectorXd rhs) {
  const auto m = t.diag.size();
  Eigen::VectorXd c(m), d = t.diag;
  for (Eigen::Index i = 1; i < m; ++i) {
    const double w = t.off[i - 1] / d[i - 1];
    d[i] -= w * t.off[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  Eigen::VectorXd x(m);
  x[m - 1] = rhs[m - 1] / d[m - 1];
  for (Eigen::Index i = m - 2; i >= 0; --i) x[i] = (rhs[i] - t.off[i] * x[i + 1]) / d[i];
  return x;
}

Eigen::VectorXd with_boundary(const Eigen::VectorXd& interior) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(interior.size() + 2);
  v.segment(1, interior.size()) = interior;
  return v;
}

double max_abs(const Eigen::Ref<const Eigen::VectorXd>& v) { return v.cwiseAbs().maxCoeff(); }

}  // namespace

Solution1D solve_1d(const Potential1D& V, int n_dof, int n_pairs) {
  if (n_pairs < 0) throw std::invalid_argument("n_pairs must be >= 0");
  if (n_dof < 10 * n_pairs)
    throw ResolutionError("resolution guard: n_dof = " + std::to_string(n_dof) + " < 10 * n_pairs = " +
                          std::to_string(10 * n_pairs));
  const Tridiagonal t = operator_matrix(V, n_dof);
  Solution1D s;
  s.intervals = n_dof;
  s.x = Eigen::VectorXd::LinSpaced(n_dof + 1, 0.0, 1.0);
  s.u = with_boundary(thomas(t, Eigen::VectorXd::Ones(t.diag.size())));

  const lapack_int m = static_cast<lapack_int>(t.diag.size());
  s.lambda.resize(n_pairs);
  s.psi = Eigen::MatrixXd::Zero(n_dof + 1, n_pairs);
  if (n_pairs == 0) return s;
  Eigen::VectorXd d = t.diag, e(m);
  e.head(m - 1) = t.off;
  e[m - 1] = 0.0;
  Eigen::VectorXd w(m);
  Eigen::MatrixXd Z(m, n_pairs);
  std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(n_pairs));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', m, d.data(), e.data(), 0.0, 0.0, 1, n_pairs,
                                         0.0, &found, w.data(), Z.data(), m, isuppz.data());
  if (info != 0 || found != n_pairs) throw std::runtime_error("dstevr failed: info " + std::to_string(info));
  const double scale = 1.0 / std::sqrt(s.h());
  for (int j = 0; j < n_pairs; ++j) {
    s.lambda[j] = w[j];
    Eigen::VectorXd v = Z.col(j) * scale;
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    if (v[imax] < 0.0) v = -v;
    s.psi.col(j) = with_boundary(v);
  }
  return s;
}

Eigen::VectorXd solve_rhs(const Potential1D& V, int n_dof, const Eigen::VectorXd& g) {
  if (g.size() != n_dof + 1) throw std::invalid_argument("g must have one value per node");
  const Tridiagonal t = operator_matrix(V, n_dof);
  return with_boundary(thomas(t, g.segment(1, n_dof - 1)));
}

double envelope_check(const Solution1D& s) {
  double worst = -INFINITY;
  for (int j = 0; j < s.psi.cols(); ++j) {
    const double scale = 1.0 / (s.lambda[j] * max_abs(s.psi.col(j)));
    worst = std::max(worst, (s.psi.col(j).cwiseAbs() * scale - s.u).maxCoeff());
  }
  return worst;
}

FourierResult fourier_reconstruct(const Solution1D& s, int N) {
  if (N < 0 || N > s.psi.cols()) throw std::invalid_argument("N exceeds the available pairs");
  FourierResult f;
  f.partial = Eigen::VectorXd::Zero(s.u.size());
  for (int n = 0; n < N; ++n) {
    const double integral = s.h() * s.psi.col(n).sum();
    f.c.push_back(integral / s.lambda[n]);
    f.partial += f.c.back() * s.psi.col(n);
  }
  f.l2_error = std::sqrt(s.h() * (s.u - f.partial).squaredNorm());
  f.l2_norm_u = std::sqrt(s.h() * s.u.squaredNorm());
  return f;
}

double fourier_coefficient_free(int n) {
  if (n % 2 == 0) return 0.0;
  const double a = n * std::numbers::pi;
  return 2.0 * std::numbers::sqrt2 / (a * a * a);
}

namespace {

std::vector<Eigen::Index> local_maxima(const Eigen::VectorXd& v, double threshold) {
  std::vector<Eigen::Index> out;
  for (Eigen::Index i = 1; i + 1 < v.size(); ++i)
    if (v[i] > v[i - 1] && v[i] >= v[i + 1] && v[i] >= threshold) out.push_back(i);
  return out;
}

}  // namespace

Census ground_state_census(const Solution1D& s) {
  Census c;
  for (Eigen::Index i : local_maxima(s.u, 0.0)) c.peaks.push_back({s.x[i], s.u[i], -1, 0.0});
  std::stable_sort(c.peaks.begin(), c.peaks.end(), [](const PeakMatch& a, const PeakMatch& b) { return a.u_peak > b.u_peak; });
  std::vector<std::vector<double>> psi_peaks(s.psi.cols());
  for (int j = 0; j < s.psi.cols(); ++j) {
    const Eigen::VectorXd a = s.psi.col(j).cwiseAbs();
    for (Eigen::Index i : local_maxima(a, 0.5 * a.maxCoeff())) psi_peaks[j].push_back(s.x[i]);
  }
  std::vector<bool> taken(s.psi.cols(), false);
  for (auto& p : c.peaks) {
    double best = INFINITY;
    for (int j = 0; j < s.psi.cols(); ++j) {
      if (taken[j]) continue;
      for (double xp : psi_peaks[j]) {
        const double d = std::abs(xp - p.x_peak);
        if (d < best - 1e-12) {
          best = d;
          p.pair = j + 1;
        }
      }
    }
    if (p.pair > 0) {
      taken[p.pair - 1] = true;
      p.distance = best;
    } else {
      ++c.unmatched;
    }
  }
  return c;
}

namespace {

void row(std::ostream& os, std::initializer_list<double> vals) {
  char buf[32];
  bool first = true;
  for (double v : vals) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << (first ? "" : " ") << buf;
    first = false;
  }
}

}  // namespace

void write_potential_dat(std::ostream& os, const Potential1D& V) {
  os << "# x V\n";
  const auto b = V.breakpoints();
  for (int i = 0; i < V.pieces(); ++i) {
    row(os, {b[i], V.values[i]});
    os << '\n';
    row(os, {b[i + 1], V.values[i]});
    os << '\n';
  }
}

void write_envelope_dat(std::ostream& os, const Solution1D& s, const std::vector<int>& pairs) {
  os << "# x u -u";
  for (int j : pairs) os << " psi" << j;
  os << '\n';
  std::vector<double> scale;
  for (int j : pairs) {
    if (j < 1 || j > s.psi.cols()) throw std::invalid_argument("pair index out of range");
    scale.push_back(1.0 / (s.lambda[j - 1] * max_abs(s.psi.col(j - 1))));
  }
  for (Eigen::Index i = 0; i < s.x.size(); ++i) {
    row(os, {s.x[i], s.u[i], -s.u[i]});
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      os << ' ';
      row(os, {s.psi(i, pairs[k] - 1) * scale[k]});
    }
    os << '\n';
  }
}

void write_fourier_dat(std::ostream& os, const Solution1D& s, const std::vector<int>& Ns) {
  os << "# x u";
  std::vector<Eigen::VectorXd> sums;
  for (int N : Ns) {
    os << " S" << N;
    sums.push_back(fourier_reconstruct(s, N).partial);
  }
  os << '\n';
  for (Eigen::Index i = 0; i < s.x.size(); ++i) {
    row(os, {s.x[i], s.u[i]});
    for (const auto& p : sums) {
      os << ' ';
      row(os, {p[i]});
    }
    os << '\n';
  }
}

}  // namespace lhp::lab1d
