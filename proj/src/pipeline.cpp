#include "hyperclust/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hyperclust/contractions.hpp"
#include "hyperclust/errors.hpp"
#include "hyperclust/rng.hpp"

namespace hyperclust {

namespace {

constexpr std::uint64_t kInitTag = 0x696e6974;    // stream for random initializations
constexpr std::uint64_t kKmeansTag = 0x6b6d6e73;  // stream for k-means restarts

template <class F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(std::string(name) + ": " + e.what());
  }
}

void sign_fix_column(Eigen::MatrixXd& X, Eigen::Index j) {
  Eigen::Index best = 0;
  double mag = -1.0;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const double a = std::abs(X(i, j));
    if (a > mag) {
      mag = a;
      best = i;
    }
  }
  if (X(best, j) < 0) X.col(j) = -X.col(j);
}

struct LloydOutcome {
  std::vector<int> labels;
  double objective = 0.0;
};

LloydOutcome lloyd_once(const Eigen::MatrixXd& pts, int K, std::uint64_t seed) {
  const Eigen::Index n = pts.rows();
  std::uint64_t counter = 0;
  auto draw = [&] { return rng::uniform(seed, counter++); };

  // Distance-squared seeding.
  Eigen::MatrixXd centers(K, pts.cols());
  std::vector<char> is_center(n, 0);
  {
    Eigen::Index first = std::min<Eigen::Index>(n - 1, static_cast<Eigen::Index>(draw() * n));
    centers.row(0) = pts.row(first);
    is_center[first] = 1;
  }
  Eigen::VectorXd d2(n);
  for (Eigen::Index i = 0; i < n; ++i) d2(i) = (pts.row(i) - centers.row(0)).squaredNorm();
  for (int c = 1; c < K; ++c) {
    const double total = d2.sum();
    Eigen::Index pick = -1;
    if (total > 0) {
      const double x = draw() * total;
      double cum = 0;
      for (Eigen::Index i = 0; i < n; ++i) {
        cum += d2(i);
        if (cum > x) {
          pick = i;
          break;
        }
      }
      if (pick < 0) {  // fp slack at the right end: last point with mass
        for (Eigen::Index i = n - 1; i >= 0; --i)
          if (d2(i) > 0) {
            pick = i;
            break;
          }
      }
    }
    if (pick < 0) {  // all remaining points coincide with chosen centers
      for (Eigen::Index i = 0; i < n; ++i)
        if (!is_center[i]) {
          pick = i;
          break;
        }
      if (pick < 0) pick = 0;
    }
    centers.row(c) = pts.row(pick);
    is_center[pick] = 1;
    for (Eigen::Index i = 0; i < n; ++i)
      d2(i) = std::min(d2(i), (pts.row(i) - centers.row(c)).squaredNorm());
  }

  std::vector<int> labels(n, -1), prev(n, -2);
  for (int iter = 0; iter < 100; ++iter) {
    for (Eigen::Index i = 0; i < n; ++i) {
      int bestc = 0;
      double bestd = (pts.row(i) - centers.row(0)).squaredNorm();
      for (int c = 1; c < K; ++c) {
        const double d = (pts.row(i) - centers.row(c)).squaredNorm();
        if (d < bestd) {
          bestd = d;
          bestc = c;
        }
      }
      labels[i] = bestc;
    }
    if (labels == prev) break;
    prev = labels;

    centers.setZero();
    std::vector<Eigen::Index> count(K, 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      centers.row(labels[i]) += pts.row(i);
      ++count[labels[i]];
    }
    for (int c = 0; c < K; ++c)
      if (count[c] > 0) centers.row(c) /= static_cast<double>(count[c]);
    std::vector<char> stolen(n, 0);
    for (int c = 0; c < K; ++c) {
      if (count[c] > 0) continue;
      // Empty cluster: restart it at the point farthest from its assigned
      // center (assigned clusters are nonempty, so those rows are means).
      Eigen::Index far = 0;
      double fard = -1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (stolen[i]) continue;
        const double d = (pts.row(i) - centers.row(labels[i])).squaredNorm();
        if (d > fard) {
          fard = d;
          far = i;
        }
      }
      centers.row(c) = pts.row(far);
      stolen[far] = 1;
    }
  }

  LloydOutcome out;
  out.labels = std::move(labels);
  for (Eigen::Index i = 0; i < n; ++i)
    out.objective += (pts.row(i) - centers.row(out.labels[i])).squaredNorm();
  return out;
}

}  // namespace

Tuning default_tuning(const Hypergraph& h, int K) {
  if (K < 1) throw DimensionError("need K >= 1");
  if (h.edge_count() == 0) throw Error("tuning needs at least one edge");
  auto deg = degrees(h);
  double mx = 0.0, ss = 0.0;
  for (auto d : deg) {
    mx = std::max(mx, static_cast<double>(d));
    ss += static_cast<double>(d) * static_cast<double>(d);
  }
  Tuning t;
  t.delta = std::min(1.0, 2.0 * std::sqrt(static_cast<double>(K)) * mx / std::sqrt(ss));
  t.cap = std::sqrt(std::log(static_cast<double>(h.node_count())));
  return t;
}

ScoreEmbedding score_embedding(const FactorMatrix& xi, double cap) {
  const Eigen::Index n = xi.rows();
  const Eigen::Index K = xi.cols();
  if (K < 2) throw DimensionError("ratio embedding needs at least two columns");
  if (!(cap > 0) || !std::isfinite(cap)) throw DimensionError("row cap must be positive finite");

  Eigen::MatrixXd X = xi.mat;
  const double colsum = X.col(0).sum();
  if (colsum < 0)
    X.col(0) = -X.col(0);
  else if (colsum == 0)
    sign_fix_column(X, 0);
  for (Eigen::Index j = 1; j < K; ++j) sign_fix_column(X, j);

  ScoreEmbedding emb;
  emb.cap = cap;
  emb.rows.resize(n, K - 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double den = X(i, 0);
    Eigen::RowVectorXd tail = X.row(i).tail(K - 1);
    if (std::abs(den) < 1e-12) {
      const double tn = tail.norm();
      emb.rows.row(i) = tn > 0 ? Eigen::RowVectorXd((cap / tn) * tail)
                               : Eigen::RowVectorXd::Zero(K - 1);
      ++emb.truncated_count;
    } else {
      Eigen::RowVectorXd r = tail / den;
      const double rn = r.norm();
      if (rn > cap) {
        r *= cap / rn;
        ++emb.truncated_count;
      }
      emb.rows.row(i) = r;
    }
  }
  return emb;
}

KmeansResult kmeans(const Eigen::MatrixXd& points, int K, int restarts, std::uint64_t seed) {
  const Eigen::Index n = points.rows();
  if (K < 1) throw DimensionError("need K >= 1");
  if (n < K) throw DimensionError("fewer points than clusters");
  if (restarts < 1) throw DimensionError("need at least one restart");
  if (!points.allFinite()) throw DimensionError("points have non-finite entries");

  KmeansResult best;
  best.objective = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    LloydOutcome o = lloyd_once(points, K, rng::split(seed, kKmeansTag, r));
    if (o.objective < best.objective) {
      best.objective = o.objective;
      best.partition.labels = std::move(o.labels);
    }
  }
  best.partition.k = K;
  return best;
}

const char* init_name(InitKind k) {
  switch (k) {
    case InitKind::diag_removed_hosvd: return "diag-removed-hosvd";
    case InitKind::hosvd: return "hosvd";
    case InitKind::randomized_projection: return "randomized-projection";
    case InitKind::nhcut: return "nhcut";
    case InitKind::explicit_factor: return "explicit";
  }
  return "?";
}

InitKind init_from_name(const std::string& name) {
  if (name == "diag-removed-hosvd" || name == "default") return InitKind::diag_removed_hosvd;
  if (name == "hosvd") return InitKind::hosvd;
  if (name == "randomized-projection" || name == "rgp") return InitKind::randomized_projection;
  if (name == "nhcut") return InitKind::nhcut;
  if (name == "explicit") return InitKind::explicit_factor;
  throw Error("unknown initialization '" + name + "'");
}

FactorMatrix nhcut_init(const Hypergraph& h, int K) {
  const int n = h.node_count();
  Eigen::MatrixXd W = project_graph(h, true).adjacency;
  Eigen::VectorXd deg = W.rowwise().sum();
  bool isolated = false;
  Eigen::VectorXd dinv(n);
  for (int i = 0; i < n; ++i) {
    if (deg(i) > 0) {
      dinv(i) = 1.0 / std::sqrt(deg(i));
    } else {
      dinv(i) = 0.0;
      isolated = true;
    }
  }
  Eigen::MatrixXd L = dinv.asDiagonal() * W * dinv.asDiagonal();
  SymEigs e = top_eigenvectors_sym(L, K, false);
  return make_factor(e.vectors, isolated || e.numerical_rank < K);
}

namespace {

FactorMatrix build_init(const Hypergraph& h, const DetectOptions& opts) {
  switch (opts.init) {
    case InitKind::diag_removed_hosvd:
      return diag_removed_hosvd_init(h, opts.K);
    case InitKind::hosvd:
      return hosvd_init(h, opts.K);
    case InitKind::randomized_projection:
      return randomized_projection_init(
          h, opts.K, opts.eps,
          rng::split(opts.seed, kInitTag, static_cast<std::uint64_t>(h.order())));
    case InitKind::nhcut:
      return nhcut_init(h, opts.K);
    case InitKind::explicit_factor:
      if (!opts.explicit_init) throw DimensionError("explicit initialization not supplied");
      if (opts.explicit_init->rows() != h.node_count() || opts.explicit_init->cols() != opts.K)
        throw DimensionError("explicit initialization must be n x K");
      return *opts.explicit_init;
  }
  throw Error("unknown initialization kind");
}

struct EmbedOutcome {
  Eigen::MatrixXd rows;
  DetectDiagnostics diag;
  bool flagged = false;
};

EmbedOutcome embed_one(const Hypergraph& h, const DetectOptions& opts) {
  if (opts.K < 2) throw DimensionError("detection needs K >= 2");
  EmbedOutcome out;
  Tuning tuning = stage("tuning", [&] {
    Tuning t = default_tuning(h, opts.K);
    if (opts.delta) t.delta = *opts.delta;
    if (opts.cap) t.cap = *opts.cap;
    return t;
  });
  FactorMatrix init = stage("initialization", [&] { return build_init(h, opts); });
  HooiConfig cfg;
  cfg.K = opts.K;
  cfg.delta = tuning.delta;
  cfg.t_max = opts.t_max;
  cfg.tol = opts.tol;
  HooiResult hooi = stage("power-iteration", [&] { return reg_hooi(h, init, cfg); });
  ScoreEmbedding emb =
      stage("embedding", [&] { return score_embedding(hooi.factor, tuning.cap); });

  out.rows = std::move(emb.rows);
  out.diag.delta = tuning.delta;
  out.diag.cap = tuning.cap;
  out.diag.hooi_iterations = hooi.iterations;
  out.diag.truncated_count = emb.truncated_count;
  out.diag.flagged = init.flagged || hooi.flagged;
  out.diag.init = init_name(opts.init);
  out.diag.spectrum = hooi.final_singular_values;
  out.flagged = out.diag.flagged;
  return out;
}

}  // namespace

DetectResult tensor_score(const Hypergraph& h, const DetectOptions& opts) {
  EmbedOutcome emb = embed_one(h, opts);
  KmeansResult km = stage("clustering", [&] {
    return kmeans(emb.rows, opts.K, opts.kmeans_restarts, rng::split(opts.seed, kKmeansTag));
  });
  DetectResult res;
  res.partition = std::move(km.partition);
  res.partition.flagged = emb.flagged;
  res.diagnostics = std::move(emb.diag);
  return res;
}

const char* baseline_name(BaselineMethod m) {
  switch (m) {
    case BaselineMethod::binary_projection_score: return "binary-projection";
    case BaselineMethod::weighted_projection_score: return "weighted-projection";
    case BaselineMethod::nhcut: return "nhcut";
    case BaselineMethod::hosvd_kmeans: return "hosvd-kmeans";
  }
  return "?";
}

Partition baseline_detect(const Hypergraph& h, int K, BaselineMethod method, std::uint64_t seed,
                          int restarts) {
  if (K < 2) throw DimensionError("detection needs K >= 2");
  const std::uint64_t kseed = rng::split(seed, kKmeansTag);
  switch (method) {
    case BaselineMethod::binary_projection_score:
    case BaselineMethod::weighted_projection_score: {
      const bool weighted = method == BaselineMethod::weighted_projection_score;
      Eigen::MatrixXd W = project_graph(h, weighted).adjacency;
      SymEigs e = top_eigenvectors_sym(W, K, true);
      FactorMatrix f = make_factor(e.vectors, e.numerical_rank < K);
      ScoreEmbedding emb =
          score_embedding(f, std::sqrt(std::log(static_cast<double>(h.node_count()))));
      KmeansResult km = kmeans(emb.rows, K, restarts, kseed);
      km.partition.flagged = f.flagged;
      return km.partition;
    }
    case BaselineMethod::nhcut: {
      FactorMatrix f = nhcut_init(h, K);
      Eigen::MatrixXd R = f.mat;
      bool zero_row = false;
      for (Eigen::Index i = 0; i < R.rows(); ++i) {
        const double rn = R.row(i).norm();
        if (rn > 0)
          R.row(i) /= rn;
        else
          zero_row = true;
      }
      KmeansResult km = kmeans(R, K, restarts, kseed);
      km.partition.flagged = f.flagged || zero_row;
      return km.partition;
    }
    case BaselineMethod::hosvd_kmeans: {
      FactorMatrix f = hosvd_init(h, K);
      KmeansResult km = kmeans(f.mat, K, restarts, kseed);
      km.partition.flagged = f.flagged;
      return km.partition;
    }
  }
  throw Error("unknown baseline method");
}

Partition stacked_score(const std::vector<Hypergraph>& graphs, const DetectOptions& opts) {
  if (graphs.empty()) throw DimensionError("need at least one hypergraph");
  const int n = graphs.front().node_count();
  for (const auto& g : graphs)
    if (g.node_count() != n) throw DimensionError("all orders must share the node set");

  std::vector<Eigen::MatrixXd> blocks;
  bool flagged = false;
  for (const auto& g : graphs) {
    try {
      EmbedOutcome out = embed_one(g, opts);
      flagged = flagged || out.flagged;
      blocks.push_back(std::move(out.rows));
    } catch (const Error&) {
      flagged = true;  // drop this order, keep going
    }
  }
  if (blocks.empty()) throw Error("every edge order failed to embed");

  Eigen::Index cols = 0;
  for (const auto& b : blocks) cols += b.cols();
  Eigen::MatrixXd X(n, cols);
  Eigen::Index at = 0;
  for (const auto& b : blocks) {
    X.middleCols(at, b.cols()) = b;
    at += b.cols();
  }
  KmeansResult km = stage("clustering", [&] {
    return kmeans(X, opts.K, opts.kmeans_restarts, rng::split(opts.seed, kKmeansTag));
  });
  km.partition.flagged = flagged;
  return km.partition;
}

Hypergraph dummy_node_lift(const EdgeList& list, int m0) {
  if (m0 < 2) throw DimensionError("target order must be at least 2");
  if (list.edges.empty()) throw Error("cannot lift an empty edge list");
  if (list.max_order() > m0)
    throw InvalidHyperedgeError("edge of order " + std::to_string(list.max_order()) +
                                " exceeds target order " + std::to_string(m0));
  if (list.min_order() < 2) throw InvalidHyperedgeError("edge of order below 2");

  const int n = list.n;
  std::vector<std::vector<std::uint32_t>> lifted;
  lifted.reserve(list.edges.size());
  for (const auto& e : list.edges) {
    std::vector<std::uint32_t> le(e);
    // An order-m edge is completed by the dummies shared by every edge of
    // order >= m, so equal-order edges stay distinguishable after the lift.
    for (int d = static_cast<int>(e.size()) + 1; d <= m0; ++d)
      le.push_back(static_cast<std::uint32_t>(n + d - 3));
    lifted.push_back(std::move(le));
  }
  return Hypergraph(n + m0 - 2, m0, lifted);
}

DetectResult tensor_score_nonuniform(const EdgeList& list, const DetectOptions& opts) {
  const int n = list.n;
  Hypergraph h = dummy_node_lift(list, std::max(2, list.max_order()));
  EmbedOutcome emb = embed_one(h, opts);
  Eigen::MatrixXd real_rows = emb.rows.topRows(n);
  KmeansResult km = stage("clustering", [&] {
    return kmeans(real_rows, opts.K, opts.kmeans_restarts, rng::split(opts.seed, kKmeansTag));
  });
  DetectResult res;
  res.partition = std::move(km.partition);
  res.partition.flagged = emb.flagged;
  res.diagnostics = std::move(emb.diag);
  return res;
}

}  // namespace hyperclust
