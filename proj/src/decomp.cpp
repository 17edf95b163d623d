#include "hyperclust/decomp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hyperclust/contractions.hpp"
#include "hyperclust/errors.hpp"
#include "hyperclust/rng.hpp"

namespace hyperclust {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

FactorMatrix eigs_init(const Eigen::MatrixXd& S, int K, bool by_abs) {
  SymEigs e = top_eigenvectors_sym(S, K, by_abs);
  return make_factor(e.vectors, e.numerical_rank < K);
}

using ContractFn = std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)>;

HooiResult run_hooi(int n, const ContractFn& contract, const FactorMatrix& init,
                    const HooiConfig& cfg, const FactorMatrix* reference) {
  if (cfg.K < 1 || cfg.K > n) throw DimensionError("rank outside [1, n]");
  if (init.rows() != n || init.cols() != cfg.K)
    throw DimensionError("initialization must be n x K");
  if (!(cfg.delta > 0)) throw DimensionError("row cap must be positive");
  if (reference && (reference->rows() != n || reference->cols() != cfg.K))
    throw DimensionError("reference factor must be n x K");

  HooiResult res;
  res.factor = init;
  res.flagged = init.flagged;
  if (cfg.record_trace)
    res.trace.push_back(
        {kNan, reference ? subspace_distance(init, *reference) : kNan});

  for (int t = 1; t <= cfg.t_max; ++t) {
    FactorMatrix capped = regularize_factor(res.factor.mat, cfg.delta);
    res.flagged = res.flagged || capped.flagged;
    Eigen::MatrixXd M = contract(capped.mat);
    TruncatedSvd svd = truncated_svd(M, cfg.K);
    if (!(svd.sigma(cfg.K - 1) > svd.sigma(0) * 1e-13)) {
      // Rank collapse: the contracted unfolding no longer spans K directions.
      // Keep the best iterate seen so far rather than a garbage subspace.
      res.flagged = true;
      break;
    }
    double change = subspace_distance(svd.U, res.factor.mat);
    res.factor = make_factor(svd.U, res.factor.flagged);
    res.iterations = t;
    res.final_singular_values = svd.sigma;
    if (cfg.record_trace)
      res.trace.push_back(
          {change, reference ? subspace_distance(res.factor, *reference) : kNan});
    if (change < cfg.tol) break;
  }
  res.factor.flagged = res.flagged;
  return res;
}

// Same row-cap rule as the detection pipeline, restated here for the rank
// sweep: 2 sqrt(K) max_i L_i / sqrt(sum_i L_i^2), clamped into (0, 1].
double degree_row_cap(const Hypergraph& h, int K) {
  auto deg = degrees(h);
  double mx = 0.0, ss = 0.0;
  for (auto d : deg) {
    mx = std::max(mx, static_cast<double>(d));
    ss += static_cast<double>(d) * static_cast<double>(d);
  }
  if (!(ss > 0)) return 1.0;
  return std::min(1.0, 2.0 * std::sqrt(static_cast<double>(K)) * mx / std::sqrt(ss));
}

}  // namespace

FactorMatrix hosvd_init(const Hypergraph& h, int K) {
  return eigs_init(cooccurrence_gram(h, false), K, true);
}

FactorMatrix diag_removed_hosvd_init(const Hypergraph& h, int K) {
  return eigs_init(cooccurrence_gram(h, true), K, true);
}

FactorMatrix randomized_projection_init(const Hypergraph& h, int K, const Eigen::VectorXd& eta) {
  if (h.order() == 2) return eigs_init(project_graph(h, false).adjacency, K, true);
  return eigs_init(contract_to_matrix(h, eta), K, true);
}

FactorMatrix randomized_projection_init(const Hypergraph& h, int K, double eps,
                                        std::uint64_t seed) {
  if (!(eps >= 0) || eps >= 1) throw DimensionError("projection halfwidth must be in [0, 1)");
  Eigen::VectorXd eta(h.node_count());
  for (int i = 0; i < h.node_count(); ++i)
    eta(i) = 1.0 - eps + 2.0 * eps * rng::uniform(seed, static_cast<std::uint64_t>(i));
  return randomized_projection_init(h, K, eta);
}

FactorMatrix regularize_factor(const Eigen::MatrixXd& X, double delta) {
  if (X.rows() < X.cols() || X.cols() < 1) throw DimensionError("factor must be tall");
  if (!(delta > 0)) throw DimensionError("row cap must be positive");
  if (!X.allFinite()) throw DimensionError("factor has non-finite entries");
  if (X.cwiseAbs().maxCoeff() == 0.0) throw DimensionError("factor is identically zero");

  Eigen::MatrixXd Y = X;
  for (Eigen::Index i = 0; i < Y.rows(); ++i) {
    const double r = Y.row(i).norm();
    if (r > delta) Y.row(i) *= delta / r;
  }
  const int K = static_cast<int>(X.cols());
  TruncatedSvd svd = truncated_svd(Y, K);
  const bool deficient = !(svd.sigma(K - 1) > svd.sigma(0) * 1e-12);
  return make_factor(svd.U, deficient);
}

HooiResult reg_hooi(const Hypergraph& h, const FactorMatrix& init, const HooiConfig& cfg,
                    const FactorMatrix* reference) {
  return run_hooi(
      h.node_count(), [&](const Eigen::MatrixXd& X) { return contract_all_but_one(h, X); }, init,
      cfg, reference);
}

HooiResult reg_hooi_dense(const DenseTensor& t, const FactorMatrix& init, const HooiConfig& cfg,
                          const FactorMatrix* reference) {
  return run_hooi(
      t.dim(), [&](const Eigen::MatrixXd& X) { return t.contract_all_but_one(X); }, init, cfg,
      reference);
}

int pick_k_from_spectrum(const Eigen::VectorXd& sigmas, int n, KSelectMode mode) {
  const int r = static_cast<int>(sigmas.size());
  if (r < 2) throw DimensionError("need at least two singular values");
  if (n < 16) throw DimensionError("count selection needs n >= 16");
  const double threshold = std::log(std::log(static_cast<double>(n)));

  auto ratio = [&](int k) {  // sigma_{k-1} / sigma_k with 1-based k
    const double lo = sigmas(k - 1);
    if (lo <= 0) return std::numeric_limits<double>::infinity();
    return sigmas(k - 2) / lo;
  };

  if (mode == KSelectMode::as_written) {
    for (int k = r; k >= 2; --k)
      if (ratio(k) <= threshold) return k;
    return r;
  }
  for (int k = r; k >= 2; --k)
    if (ratio(k) >= threshold) return k - 1;
  return r;
}

KEstimate estimate_k(const Hypergraph& h, int r, KSelectMode mode) {
  const int n = h.node_count();
  if (n < 16) throw DimensionError("count selection needs n >= 16");
  if (r < 2 || r > n) throw DimensionError("rank sweep needs 2 <= r <= n");
  if (h.edge_count() == 0) throw Error("cannot estimate a count from an empty hypergraph");

  FactorMatrix init = diag_removed_hosvd_init(h, r);
  HooiConfig cfg;
  cfg.K = r;
  cfg.delta = degree_row_cap(h, r);
  HooiResult res = reg_hooi(h, init, cfg);

  Eigen::MatrixXd M = h.order() >= 3 ? contract_modes3_up(h, res.factor.mat)
                                     : project_graph(h, false).adjacency * res.factor.mat;
  TruncatedSvd svd = truncated_svd(M, r);
  KEstimate out;
  out.sigmas = svd.sigma;
  out.k_hat = pick_k_from_spectrum(svd.sigma, n, mode);
  return out;
}

}  // namespace hyperclust
