#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace hyperclust {

// Matrix with orthonormal columns (checked to 1e-10 on construction) plus a
// flag that upstream stages set when they had to patch rank deficiency.
struct FactorMatrix {
  Eigen::MatrixXd mat;
  bool flagged = false;

  Eigen::Index rows() const { return mat.rows(); }
  Eigen::Index cols() const { return mat.cols(); }
};

FactorMatrix make_factor(Eigen::MatrixXd m, bool flagged = false);

struct TruncatedSvd {
  Eigen::MatrixXd U;      // p x K, orthonormal, sign-fixed
  Eigen::VectorXd sigma;  // K values, descending
};

// Top-K left singular pairs. Uses a full decomposition when min(p,q) <= 512,
// otherwise deterministic block power iteration (tol 1e-10, at most 1000
// sweeps). Columns are signed so the largest-magnitude entry is positive
// (lowest index on ties).
TruncatedSvd truncated_svd(const Eigen::MatrixXd& M, int K);

// Spectral norm of U U^T - V V^T for orthonormal inputs of equal shape.
double subspace_distance(const Eigen::MatrixXd& U, const Eigen::MatrixXd& V);
double subspace_distance(const FactorMatrix& U, const FactorMatrix& V);

struct SymEigs {
  Eigen::MatrixXd vectors;  // n x K, sign-fixed
  Eigen::VectorXd values;   // matching eigenvalues in the requested order
  int numerical_rank = 0;   // of the whole matrix, by relative threshold
};

// Leading K eigenpairs of a symmetric matrix, ordered by |value| when by_abs
// is set and by algebraic value otherwise.
SymEigs top_eigenvectors_sym(const Eigen::MatrixXd& S, int K, bool by_abs);

// Per-column sign fix: make the largest-magnitude entry positive, breaking
// ties toward the lowest row index.
void apply_sign_convention(Eigen::MatrixXd& U);

}  // namespace hyperclust
