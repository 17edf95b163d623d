#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hyperclust/decomp.hpp"
#include "hyperclust/hypergraph.hpp"
#include "hyperclust/linalg.hpp"

namespace hyperclust {

struct Tuning {
  double delta = 1.0;  // row-norm cap inside the power iteration
  double cap = 1.0;    // embedding row-norm cap T
};

// Degree-driven defaults: delta = 2 sqrt(K) max_i L_i / sqrt(sum L_i^2)
// clamped into (0, 1], cap = sqrt(log n). Requires at least one edge.
Tuning default_tuning(const Hypergraph& h, int K);

struct ScoreEmbedding {
  Eigen::MatrixXd rows;     // n x (K-1) entrywise eigenvector ratios
  double cap = 0.0;         // the row-norm cap that was applied
  int truncated_count = 0;  // rows shrunk onto the cap or rescued from a
                            // vanishing leading entry
};

// Entrywise ratios xi_k(i) / xi_1(i), k = 2..K, after signing xi_1 to have
// nonnegative sum (remaining columns get the largest-entry sign fix). Rows
// with |xi_1(i)| below 1e-12 are replaced by the cap-length direction of the
// remaining entries; rows above the cap are shrunk onto it.
ScoreEmbedding score_embedding(const FactorMatrix& xi, double cap);

struct Partition {
  std::vector<int> labels;
  int k = 0;
  bool flagged = false;
};

struct KmeansResult {
  Partition partition;
  double objective = 0.0;  // sum of squared distances to assigned centers
};

// Deterministic k-means with distance-squared seeding, best of `restarts`
// runs (ties keep the earliest restart).
KmeansResult kmeans(const Eigen::MatrixXd& points, int K, int restarts, std::uint64_t seed);

enum class InitKind {
  diag_removed_hosvd,
  hosvd,
  randomized_projection,
  nhcut,
  explicit_factor,
};

const char* init_name(InitKind k);
InitKind init_from_name(const std::string& name);

struct DetectOptions {
  int K = 2;
  InitKind init = InitKind::diag_removed_hosvd;
  double eps = 0.3;  // randomized projection halfwidth
  std::optional<FactorMatrix> explicit_init;
  std::optional<double> delta;  // override the degree-driven row cap
  std::optional<double> cap;    // override the embedding cap T
  int t_max = 50;
  double tol = 1e-8;
  int kmeans_restarts = 20;
  std::uint64_t seed = 1;
};

struct DetectDiagnostics {
  double delta = 0.0;
  double cap = 0.0;
  int hooi_iterations = 0;
  int truncated_count = 0;
  bool flagged = false;
  std::string init;
  Eigen::VectorXd spectrum;  // singular values at the final iteration
};

struct DetectResult {
  Partition partition;
  DetectDiagnostics diagnostics;
};

// Full detection pipeline: initialization, capped power iteration, ratio
// embedding, k-means. Errors from inside are tagged with the stage name.
DetectResult tensor_score(const Hypergraph& h, const DetectOptions& opts);

// Top-K eigenbasis (algebraic order) of the symmetrically normalized
// weighted projection; usable as an initialization for the power iteration.
// The classical cut baseline row-normalizes this basis before clustering.
FactorMatrix nhcut_init(const Hypergraph& h, int K);

enum class BaselineMethod {
  binary_projection_score,
  weighted_projection_score,
  nhcut,
  hosvd_kmeans,
};

const char* baseline_name(BaselineMethod m);

Partition baseline_detect(const Hypergraph& h, int K, BaselineMethod method, std::uint64_t seed,
                          int restarts = 20);

// One embedding per edge order, concatenated column-wise, then a single
// k-means. Orders whose embedding fails are dropped with a flag; all orders
// failing is an error.
Partition stacked_score(const std::vector<Hypergraph>& graphs, const DetectOptions& opts);

// Lift mixed-order edges to uniform order m0 by appending order-specific
// dummy nodes: an order-m edge gains dummies n+(m-2) .. n+(m0-3), giving
// m0 - 2 extra nodes overall.
Hypergraph dummy_node_lift(const EdgeList& list, int m0);

// Detection on a mixed-order edge list via the dummy-node lift; dummy rows
// are dropped from the embedding before clustering.
DetectResult tensor_score_nonuniform(const EdgeList& list, const DetectOptions& opts);

}  // namespace hyperclust
