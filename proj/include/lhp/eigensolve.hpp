#pragma once

// Sparse Cholesky factorization, the landscape solve and the eigensolvers for
// K x = lambda M x with K SPD and M diagonal positive.

#include "lhp/assembly.hpp"

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

namespace lhp {

class IndefiniteMatrix : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Supernodal Cholesky factorization of a symmetric matrix given by its lower
/// triangle. Throws IndefiniteMatrix if a pivot is not positive, which for SIPG
/// usually means the penalty parameter is too small.
class Factorization {
 public:
  explicit Factorization(const SymmetricMatrix& K);
  ~Factorization();
  Factorization(const Factorization&) = delete;
  Factorization& operator=(const Factorization&) = delete;

  /// K^{-1} b; with `refine` one step of iterative refinement is added.
  Eigen::VectorXd solve(const Eigen::VectorXd& b, bool refine = true) const;
  Eigen::MatrixXd solve(const Eigen::MatrixXd& B, bool refine = true) const;

  /// Number of forward/backward substitution pairs performed so far.
  std::int64_t backsolves() const { return backsolves_; }
  int dim() const { return K_.dim(); }
  const SymmetricMatrix& matrix() const { return K_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  SymmetricMatrix K_;
  mutable std::int64_t backsolves_ = 0;
};

/// Landscape coefficients: solution of K u = rhs.
Eigen::VectorXd solve_landscape(const Factorization& K, const Eigen::VectorXd& rhs);

struct EigenpairSet {
  Eigen::VectorXd values;            // ascending
  Eigen::MatrixXd vectors;           // columns, M-orthonormal
  Eigen::VectorXd residuals;         // |K^{-1}(K phi - lambda M phi)|_M
  std::vector<bool> converged;       // algebraic convergence of each pair
  std::int64_t backsolves = 0;       // work spent producing this set
  int restarts = 0;

  int size() const { return static_cast<int>(values.size()); }
  bool all_converged() const;
};

struct LanczosOptions {
  double tol = 1e-10;    // relative residual
  int max_restarts = 300;
  std::uint64_t seed = 0;
  /// Subspace dimension; 0 selects max(2M, M+20).
  int subspace = 0;
  /// Krylov block size; resolves eigenvalue multiplicities up to this value
  /// directly, higher ones through a verification pass from random directions.
  int block = 1;
};

/// The M algebraically smallest pairs by thick-restart block Lanczos on
/// K^{-1} M in the M-inner product with full reorthogonalization.
EigenpairSet lowest_eigenpairs(const Factorization& K, const Eigen::VectorXd& mass, int M,
                               const LanczosOptions& opt = {});

/// Relative residual |K phi - lambda M phi|_{M^{-1}} / lambda.
double relative_residual(const SymmetricMatrix& K, const Eigen::VectorXd& mass, double lambda,
                         const Eigen::VectorXd& phi);

struct PicardOptions {
  double tol = 1e-10;
  int max_iterations = 200;
  int stagnation_window = 10;
  double stagnation_reduction = 0.01;
};

struct PicardReport {
  int iterations = 0;
  bool stagnated = false;
  std::int64_t backsolves = 0;
};

/// Block inverse iteration on the selected pairs, kept M-orthogonal to the
/// other pairs, with Rayleigh-Ritz inside the selected block. Non-selected
/// pairs are returned unchanged. Selected pairs that fail to reach `tol` are
/// flagged unconverged.
EigenpairSet picard_refine(const Factorization& K, const Eigen::VectorXd& mass, const EigenpairSet& pairs,
                           const std::vector<int>& indices, const PicardOptions& opt = {},
                           PicardReport* report = nullptr);

}  // namespace lhp
