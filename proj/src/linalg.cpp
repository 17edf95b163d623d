#include "hyperclust/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "hyperclust/errors.hpp"
#include "hyperclust/rng.hpp"

namespace hyperclust {

namespace {

constexpr int kDenseSvdLimit = 512;
constexpr int kDenseEigLimit = 2048;
constexpr double kIterTol = 1e-10;
constexpr int kIterCap = 1000;

void check_finite(const Eigen::MatrixXd& M, const char* what) {
  if (!M.allFinite()) throw DimensionError(std::string(what) + " has non-finite entries");
}

// Orthonormalize the columns of Y in place via thin Householder QR.
Eigen::MatrixXd orth(const Eigen::MatrixXd& Y) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(Y);
  Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(Y.rows(), Y.cols());
  return Q;
}

Eigen::MatrixXd seeded_gaussianish(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  Eigen::MatrixXd G(rows, cols);
  std::uint64_t c = 0;
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) G(i, j) = 2.0 * rng::uniform(seed, c++) - 1.0;
  return G;
}

}  // namespace

void apply_sign_convention(Eigen::MatrixXd& U) {
  for (Eigen::Index j = 0; j < U.cols(); ++j) {
    Eigen::Index best = 0;
    double mag = -1.0;
    for (Eigen::Index i = 0; i < U.rows(); ++i) {
      double a = std::abs(U(i, j));
      if (a > mag) {
        mag = a;
        best = i;
      }
    }
    if (U(best, j) < 0) U.col(j) = -U.col(j);
  }
}

FactorMatrix make_factor(Eigen::MatrixXd m, bool flagged) {
  check_finite(m, "factor matrix");
  if (m.cols() < 1 || m.rows() < m.cols())
    throw DimensionError("factor matrix must be tall with at least one column");
  Eigen::MatrixXd gram = m.transpose() * m;
  double dev = (gram - Eigen::MatrixXd::Identity(m.cols(), m.cols())).cwiseAbs().maxCoeff();
  if (dev > 1e-10)
    throw DimensionError("columns are not orthonormal (deviation " + std::to_string(dev) + ")");
  return FactorMatrix{std::move(m), flagged};
}

TruncatedSvd truncated_svd(const Eigen::MatrixXd& M, int K) {
  check_finite(M, "svd input");
  const Eigen::Index p = M.rows(), q = M.cols();
  if (K < 1 || K > std::min(p, q))
    throw DimensionError("svd rank K=" + std::to_string(K) + " outside [1, min(p,q)]");

  TruncatedSvd out;
  if (std::min(p, q) <= kDenseSvdLimit) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU);
    out.U = svd.matrixU().leftCols(K);
    out.sigma = svd.singularValues().head(K);
  } else {
    // Block power iteration on M M^T (or M^T M when q is the short side),
    // seeded deterministically, followed by a Rayleigh-Ritz extraction.
    const bool tall = p <= q;
    const Eigen::MatrixXd& A = M;
    Eigen::Index side = tall ? p : q;
    Eigen::MatrixXd Q = orth(seeded_gaussianish(side, K, 0xC0FFEEULL));
    for (int it = 0; it < kIterCap; ++it) {
      Eigen::MatrixXd Y = tall ? Eigen::MatrixXd(A * (A.transpose() * Q))
                               : Eigen::MatrixXd(A.transpose() * (A * Q));
      Eigen::MatrixXd Qn = orth(Y);
      double change = subspace_distance(Qn, Q);
      Q = Qn;
      if (change < kIterTol) break;
    }
    if (tall) {
      Eigen::MatrixXd B = Q.transpose() * A;  // K x q
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(B, Eigen::ComputeThinU);
      out.U = Q * svd.matrixU();
      out.sigma = svd.singularValues().head(K);
    } else {
      Eigen::MatrixXd B = A * Q;  // p x K
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(B, Eigen::ComputeThinU);
      out.U = svd.matrixU();
      out.sigma = svd.singularValues().head(K);
    }
  }
  apply_sign_convention(out.U);
  return out;
}

double subspace_distance(const Eigen::MatrixXd& U, const Eigen::MatrixXd& V) {
  if (U.rows() != V.rows() || U.cols() != V.cols())
    throw DimensionError("subspace distance needs equal shapes");
  check_finite(U, "subspace basis");
  check_finite(V, "subspace basis");
  const Eigen::Index n = U.rows(), K = U.cols();
  if (n <= 2 * K) {
    Eigen::MatrixXd D = U * U.transpose() - V * V.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(D, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
  }
  // Work inside span[U V]: with W an orthonormal basis of it, the difference
  // of projectors is congruent to a 2K x 2K symmetric matrix.
  Eigen::MatrixXd both(n, 2 * K);
  both << U, V;
  Eigen::MatrixXd W = orth(both);
  Eigen::MatrixXd WtU = W.transpose() * U;
  Eigen::MatrixXd WtV = W.transpose() * V;
  Eigen::MatrixXd D = WtU * WtU.transpose() - WtV * WtV.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(D, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double subspace_distance(const FactorMatrix& U, const FactorMatrix& V) {
  return subspace_distance(U.mat, V.mat);
}

SymEigs top_eigenvectors_sym(const Eigen::MatrixXd& S, int K, bool by_abs) {
  check_finite(S, "symmetric matrix");
  const Eigen::Index n = S.rows();
  if (S.cols() != n) throw DimensionError("matrix must be square");
  if (K < 1 || K > n) throw DimensionError("eigenpair count outside [1, n]");

  SymEigs out;
  if (n <= kDenseEigLimit) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    if (es.info() != Eigen::Success) throw Error("eigendecomposition failed");
    const Eigen::VectorXd& vals = es.eigenvalues();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      if (by_abs) {
        double da = std::abs(vals(a)), db = std::abs(vals(b));
        if (da != db) return da > db;
      }
      if (vals(a) != vals(b)) return vals(a) > vals(b);
      return a < b;
    });
    double vmax = vals.cwiseAbs().maxCoeff();
    double thr = vmax * static_cast<double>(n) * std::numeric_limits<double>::epsilon();
    out.numerical_rank = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      if (std::abs(vals(i)) > thr && vmax > 0) ++out.numerical_rank;
    out.vectors.resize(n, K);
    out.values.resize(K);
    for (int j = 0; j < K; ++j) {
      out.vectors.col(j) = es.eigenvectors().col(order[j]);
      out.values(j) = vals(order[j]);
    }
  } else {
    // Subspace iteration on S^2 keeps the largest-|value| directions; Ritz
    // values on the original S recover signs.
    Eigen::MatrixXd Q = orth(seeded_gaussianish(n, K, 0x5EEDULL));
    for (int it = 0; it < kIterCap; ++it) {
      Eigen::MatrixXd Y = S * (S * Q);
      Eigen::MatrixXd Qn = orth(Y);
      double change = subspace_distance(Qn, Q);
      Q = Qn;
      if (change < kIterTol) break;
    }
    Eigen::MatrixXd B = Q.transpose() * S * Q;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (B + B.transpose()));
    const Eigen::VectorXd& vals = es.eigenvalues();
    std::vector<int> order(K);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      if (by_abs) {
        double da = std::abs(vals(a)), db = std::abs(vals(b));
        if (da != db) return da > db;
      }
      if (vals(a) != vals(b)) return vals(a) > vals(b);
      return a < b;
    });
    out.vectors.resize(n, K);
    out.values.resize(K);
    for (int j = 0; j < K; ++j) {
      out.vectors.col(j) = Q * es.eigenvectors().col(order[j]);
      out.values(j) = vals(order[j]);
    }
    out.numerical_rank = K;  // only the computed block is visible here
  }
  apply_sign_convention(out.vectors);
  return out;
}

}  // namespace hyperclust
