#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "hyperclust/dense_tensor.hpp"
#include "hyperclust/hypergraph.hpp"
#include "hyperclust/linalg.hpp"

namespace hyperclust {

// Top-K eigenvectors of the tail co-occurrence gram matrix (with its
// diagonal kept); flags rank deficiency instead of failing.
FactorMatrix hosvd_init(const Hypergraph& h, int K);

// Same gram matrix with the diagonal removed; ordered by |eigenvalue|.
FactorMatrix diag_removed_hosvd_init(const Hypergraph& h, int K);

// Top-K eigenvectors (by |eigenvalue|) of the adjacency tensor contracted on
// modes 3..m against a random vector with entries uniform on (1-eps, 1+eps).
FactorMatrix randomized_projection_init(const Hypergraph& h, int K, double eps,
                                        std::uint64_t seed);
FactorMatrix randomized_projection_init(const Hypergraph& h, int K, const Eigen::VectorXd& eta);

// Nearest orthonormal frame with row norms capped at delta: rows of X above
// the cap are shrunk onto it, then the top-|cols| left singular vectors of
// the result are returned.
FactorMatrix regularize_factor(const Eigen::MatrixXd& X, double delta);

struct HooiConfig {
  int K = 2;
  double delta = 1.0;   // row-norm cap applied before each contraction
  int t_max = 50;
  double tol = 1e-8;    // stop when successive subspaces move less than this
  bool record_trace = false;
};

struct HooiTraceEntry {
  double subspace_change;  // distance to the previous iterate (NaN at entry 0)
  double oracle_distance;  // distance to a reference factor (NaN when absent)
};

struct HooiResult {
  FactorMatrix factor;
  int iterations = 0;
  bool flagged = false;
  std::vector<HooiTraceEntry> trace;  // entry 0 describes the initialization
  Eigen::VectorXd final_singular_values;
};

// Regularized higher-order power iteration: alternate the row-cap projection
// with a rank-K SVD of the contracted unfolding until the subspace settles.
// When reference is given (and tracing is on) each trace entry also records
// the distance to it.
HooiResult reg_hooi(const Hypergraph& h, const FactorMatrix& init, const HooiConfig& cfg,
                    const FactorMatrix* reference = nullptr);

// Same iteration against a fully materialized tensor; used to study the
// population fixed point and to cross-check the sparse path.
HooiResult reg_hooi_dense(const DenseTensor& t, const FactorMatrix& init, const HooiConfig& cfg,
                          const FactorMatrix* reference = nullptr);

enum class KSelectMode { as_written, gap };

// Pick the community count from a descending sigma vector of length r using
// the log log n ratio threshold; falls back to r when no index qualifies.
int pick_k_from_spectrum(const Eigen::VectorXd& sigmas, int n, KSelectMode mode);

struct KEstimate {
  int k_hat = 0;
  Eigen::VectorXd sigmas;
};

// Estimate the community count: run the capped iteration at rank r, contract
// modes 3..m against the result, and read the singular value profile.
// Requires n >= 16 and 2 <= r <= n.
KEstimate estimate_k(const Hypergraph& h, int r, KSelectMode mode = KSelectMode::gap);

}  // namespace hyperclust
