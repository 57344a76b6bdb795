#include "lhp/eigensolve.hpp"

#include <Eigen/CholmodSupport>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace lhp {

struct Factorization::Impl {
  Eigen::CholmodSupernodalLLT<SparseMatrix, Eigen::Lower> llt;
};

Factorization::Factorization(const SymmetricMatrix& K) : impl_(std::make_unique<Impl>()), K_(K) {
  impl_->llt.cholmod().print = 0;
  impl_->llt.compute(K.lower);
  if (impl_->llt.info() != Eigen::Success)
    throw IndefiniteMatrix("matrix is not positive definite (penalty parameter too small?)");
}

Factorization::~Factorization() = default;

Eigen::VectorXd Factorization::solve(const Eigen::VectorXd& b, bool refine) const {
  Eigen::VectorXd x = impl_->llt.solve(b);
  ++backsolves_;
  if (refine) {
    const Eigen::VectorXd r = b - K_.apply(x);
    x += impl_->llt.solve(r);
    ++backsolves_;
  }
  return x;
}

Eigen::MatrixXd Factorization::solve(const Eigen::MatrixXd& B, bool refine) const {
  Eigen::MatrixXd X = impl_->llt.solve(B);
  backsolves_ += B.cols();
  if (refine) {
    const Eigen::MatrixXd R = B - K_.lower.selfadjointView<Eigen::Lower>() * X;
    X += impl_->llt.solve(R);
    backsolves_ += B.cols();
  }
  return X;
}

Eigen::VectorXd solve_landscape(const Factorization& K, const Eigen::VectorXd& rhs) { return K.solve(rhs, true); }

bool EigenpairSet::all_converged() const {
  return std::all_of(converged.begin(), converged.end(), [](bool c) { return c; });
}

double relative_residual(const SymmetricMatrix& K, const Eigen::VectorXd& mass, double lambda,
                         const Eigen::VectorXd& phi) {
  const Eigen::VectorXd r = K.apply(phi) - lambda * mass.cwiseProduct(phi);
  return std::sqrt(r.cwiseAbs2().cwiseQuotient(mass).sum()) / std::abs(lambda);
}

namespace {

double mdot(const Eigen::VectorXd& mass, const Eigen::Ref<const Eigen::VectorXd>& x,
            const Eigen::Ref<const Eigen::VectorXd>& y) {
  return x.dot(mass.cwiseProduct(y));
}

// M-orthogonalize v against the first k columns of V (two passes); returns the
// M-norm of what is left.
double orthogonalize(const Eigen::VectorXd& mass, const Eigen::MatrixXd& V, int k, Eigen::VectorXd& v) {
  for (int pass = 0; pass < 2; ++pass) {
    if (k > 0) {
      const Eigen::VectorXd c = V.leftCols(k).transpose() * mass.cwiseProduct(v);
      v.noalias() -= V.leftCols(k) * c;
    }
  }
  return std::sqrt(std::max(0.0, mdot(mass, v, v)));
}

// M-orthonormalize the columns of Y in place via QR of M^{1/2} Y.
void m_orthonormalize(const Eigen::VectorXd& mass, Eigen::MatrixXd& Y) {
  const Eigen::VectorXd s = mass.cwiseSqrt();
  Eigen::MatrixXd Z = s.asDiagonal() * Y;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(Z);
  Z = qr.householderQ() * Eigen::MatrixXd::Identity(Z.rows(), Z.cols());
  Y = s.cwiseInverse().asDiagonal() * Z;
}

Eigen::MatrixXd random_block(std::mt19937_64& rng, int n, int b) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd v(n, b);
  for (int c = 0; c < b; ++c)
    for (int i = 0; i < n; ++i) v(i, c) = u(rng);
  return v;
}

}  // namespace

EigenpairSet lowest_eigenpairs(const Factorization& F, const Eigen::VectorXd& mass, int M, const LanczosOptions& opt) {
  const int n = F.dim();
  if (M < 1 || 2 * M > n) throw std::invalid_argument("lowest_eigenpairs: need 1 <= M <= dim/2");
  const int b = std::max(1, opt.block);
  const int keep = std::min(n - b, M + std::max(b, (std::max(2 * M, M + 20) - M) / 2));
  int m = opt.subspace > 0 ? opt.subspace : std::max(2 * M, M + 20);
  m = keep + b * std::max(1, (m - keep + b - 1) / b);
  if (m > n) m = keep + b * ((n - keep) / b);
  const std::int64_t solves0 = F.backsolves();
  std::mt19937_64 rng(opt.seed);

  Eigen::MatrixXd V(n, m), W(n, m);
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m, m);
  int k = 0;
  Eigen::MatrixXd next = random_block(rng, n, b);

  EigenpairSet out;
  Eigen::VectorXd prev_theta;  // wanted Ritz values when verification started
  bool verifying = false;      // fresh random directions were injected after convergence
  std::vector<double> best_res(M, INFINITY);
  std::vector<int> stalled(M, 0);

  for (int restart = 0;; ++restart) {
    while (k + b <= m) {
      // Block expansion: orthonormalize the new directions against the basis.
      for (int c = 0; c < b; ++c) {
        Eigen::VectorXd v = next.col(c);
        const double before = std::sqrt(mdot(mass, v, v));
        double beta = orthogonalize(mass, V, k, v);
        for (int attempt = 0; beta <= 1e-10 * before && attempt < 5; ++attempt) {
          // Invariant subspace reached: continue from a fresh random direction.
          v = random_block(rng, n, 1).col(0);
          beta = orthogonalize(mass, V, k, v);
        }
        V.col(k + c) = v / beta;
        if (c + 1 < b) {
          // Keep the remaining block directions independent of this one.
          for (int d = c + 1; d < b; ++d) next.col(d) -= mdot(mass, V.col(k + c), next.col(d)) * V.col(k + c);
        }
      }
      W.middleCols(k, b) = F.solve(Eigen::MatrixXd(mass.asDiagonal() * V.middleCols(k, b)), false);
      const Eigen::MatrixXd h = V.leftCols(k + b).transpose() * mass.asDiagonal() * W.middleCols(k, b);
      H.block(0, k, k + b, b) = h;
      H.block(k, 0, b, k + b) = h.transpose();
      next = W.middleCols(k, b);
      k += b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (H.topLeftCorner(k, k) + H.topLeftCorner(k, k).transpose()));
    // Descending theta = ascending lambda.
    const Eigen::VectorXd theta = es.eigenvalues().reverse();
    const Eigen::MatrixXd S = es.eigenvectors().rowwise().reverse();

    Eigen::MatrixXd Y = V.leftCols(k) * S.leftCols(M);
    const Eigen::MatrixXd TY = W.leftCols(k) * S.leftCols(M);
    Eigen::VectorXd lam(M), res(M);
    for (int i = 0; i < M; ++i) {
      lam[i] = 1.0 / theta[i];
      const double nrm = std::sqrt(mdot(mass, Y.col(i), Y.col(i)));
      Y.col(i) /= nrm;
      // |T y - theta y|_M / theta with T = K^{-1} M, i.e. |K^{-1}(K y - lambda M y)|_M.
      const Eigen::VectorXd d = TY.col(i) / nrm - theta[i] * Y.col(i);
      res[i] = std::sqrt(mdot(mass, d, d)) / theta[i];
    }
    // A pair whose residual stops improving has reached the rounding floor of
    // the shift-invert operator; accept it if that floor is small.
    bool all_ok = true;
    for (int i = 0; i < M; ++i) {
      if (res[i] < 0.5 * best_res[i]) {
        best_res[i] = res[i];
        stalled[i] = 0;
      } else {
        ++stalled[i];
      }
      const bool ok = res[i] <= opt.tol || (stalled[i] >= 3 && res[i] <= 1e3 * opt.tol);
      all_ok = all_ok && ok;
    }
    const bool changed = verifying && (theta.head(M) - prev_theta).cwiseAbs().maxCoeff() > 1e-10 * theta[M - 1];
    const bool done = all_ok && verifying && !changed;
    if (done || restart >= opt.max_restarts) {
      out.values = lam;
      out.vectors = Y;
      out.residuals = res;
      out.converged.resize(M);
      for (int i = 0; i < M; ++i) out.converged[i] = done || res[i] <= opt.tol;
      out.restarts = restart;
      break;
    }
    // Thick restart on the leading Ritz vectors. The continuation block is
    // made orthogonal to the whole current basis first (Krylov-Schur).
    for (int pass = 0; pass < 2; ++pass) next -= V.leftCols(k) * (V.leftCols(k).transpose() * mass.asDiagonal() * next);
    const Eigen::MatrixXd Sk = S.leftCols(keep);
    V.leftCols(keep) = (V.leftCols(k) * Sk).eval();
    W.leftCols(keep) = (W.leftCols(k) * Sk).eval();
    H.setZero();
    H.topLeftCorner(keep, keep) = theta.head(keep).asDiagonal();
    k = keep;
    if (all_ok && !verifying) {
      // Converged on this Krylov sequence; look for eigenvalues it may have
      // missed (higher multiplicity than the block size) from new directions.
      next = random_block(rng, n, b);
      verifying = true;
      prev_theta = theta.head(M);
    } else if (!all_ok) {
      verifying = false;
    } else {
      prev_theta = theta.head(M);
    }
  }
  for (int i = 0; i < M; ++i) normalize_sign(out.vectors.col(i));
  out.backsolves = F.backsolves() - solves0;
  return out;
}

EigenpairSet picard_refine(const Factorization& F, const Eigen::VectorXd& mass, const EigenpairSet& pairs,
                           const std::vector<int>& indices, const PicardOptions& opt, PicardReport* report) {
  EigenpairSet out = pairs;
  out.backsolves = 0;
  PicardReport rep;
  if (indices.empty()) {
    if (report) *report = rep;
    return out;
  }
  const SymmetricMatrix& K = F.matrix();
  const std::int64_t solves0 = F.backsolves();
  std::vector<int> sel(indices);
  std::sort(sel.begin(), sel.end());
  sel.erase(std::unique(sel.begin(), sel.end()), sel.end());
  std::vector<int> other;
  for (int j = 0; j < pairs.size(); ++j)
    if (!std::binary_search(sel.begin(), sel.end(), j)) other.push_back(j);
  const int s = static_cast<int>(sel.size());
  const int n = F.dim();

  Eigen::MatrixXd X(n, s), P(n, static_cast<Eigen::Index>(other.size()));
  for (int i = 0; i < s; ++i) X.col(i) = pairs.vectors.col(sel[i]);
  for (std::size_t i = 0; i < other.size(); ++i) P.col(static_cast<Eigen::Index>(i)) = pairs.vectors.col(other[i]);
  auto deflate = [&](Eigen::MatrixXd& Y) {
    if (P.cols() == 0) return;
    for (int pass = 0; pass < 2; ++pass) Y -= P * (P.transpose() * mass.asDiagonal() * Y);
  };
  auto rayleigh_ritz = [&](Eigen::MatrixXd& Y, Eigen::VectorXd& lam) {
    deflate(Y);
    m_orthonormalize(mass, Y);
    const Eigen::MatrixXd KY = K.lower.selfadjointView<Eigen::Lower>() * Y;
    Eigen::MatrixXd Hs = Y.transpose() * KY;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (Hs + Hs.transpose()));
    Y = (Y * es.eigenvectors()).eval();
    lam = es.eigenvalues();
  };

  Eigen::VectorXd lam(s), res(s);
  rayleigh_ritz(X, lam);
  // Each sweep measures the shift-invert residual of the current block from
  // the same solves that produce the next iterate.
  std::vector<double> history;
  for (;;) {
    Eigen::MatrixXd Y = F.solve(Eigen::MatrixXd(mass.asDiagonal() * X), false);
    for (int i = 0; i < s; ++i) {
      const Eigen::VectorXd d = Y.col(i) - X.col(i) / lam[i];
      res[i] = lam[i] * std::sqrt(mdot(mass, d, d));
    }
    history.push_back(res.maxCoeff());
    if (res.maxCoeff() <= opt.tol || rep.iterations >= opt.max_iterations) break;
    const int w = opt.stagnation_window;
    if (static_cast<int>(history.size()) > w &&
        history.back() > (1.0 - opt.stagnation_reduction) * history[history.size() - 1 - w]) {
      rep.stagnated = true;
      break;
    }
    rayleigh_ritz(Y, lam);
    X = Y;
    ++rep.iterations;
  }
  for (int i = 0; i < s; ++i) {
    Eigen::VectorXd v = X.col(i);
    normalize_sign(v);
    out.vectors.col(sel[i]) = v;
    out.values[sel[i]] = lam[i];
    out.residuals[sel[i]] = res[i];
    out.converged[sel[i]] = res[i] <= opt.tol;
  }
  // Keep the set ascending.
  std::vector<int> perm(out.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) { return out.values[a] < out.values[b]; });
  EigenpairSet sorted = out;
  for (int i = 0; i < out.size(); ++i) {
    sorted.values[i] = out.values[perm[i]];
    sorted.vectors.col(i) = out.vectors.col(perm[i]);
    sorted.residuals[i] = out.residuals[perm[i]];
    sorted.converged[i] = out.converged[perm[i]];
  }
  rep.backsolves = F.backsolves() - solves0;
  sorted.backsolves = rep.backsolves;
  if (report) *report = rep;
  return sorted;
}

}  // namespace lhp
