#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "hyperclust/errors.hpp"
#include "hyperclust/eval.hpp"
#include "hyperclust/model.hpp"
#include "hyperclust/pipeline.hpp"
#include "hyperclust/rng.hpp"
#include "oracles.hpp"

using namespace hyperclust;

namespace {

// 16-node ring of triples: every node sits in exactly three edges.
Hypergraph ring16() {
  std::vector<std::vector<std::uint32_t>> edges;
  for (std::uint32_t i = 0; i < 16; ++i) edges.push_back({i, (i + 1) % 16, (i + 2) % 16});
  return Hypergraph(16, 3, edges);
}

HdcbmParams separated_params(int n, int K, std::uint64_t /*unused*/) {
  return HdcbmParams{n,
                     3,
                     K,
                     testutil::block_labels(n, K),
                     Eigen::VectorXd::Constant(n, 0.8),
                     CoreTensor::symmetric_sbm(K, 3, 0.02)};
}

}  // namespace

TEST_SUITE_BEGIN("pipeline");

TEST_CASE("degree-driven tuning on hand-checked inputs") {
  // Equal degrees: delta = 2 sqrt(K) d / (d sqrt(n)) = 2 sqrt(2/16).
  Tuning reg = default_tuning(ring16(), 2);
  CHECK(reg.delta == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
  CHECK(reg.cap == doctest::Approx(std::sqrt(std::log(16.0))).epsilon(1e-14));

  // Skewed degrees push the raw value above one, so it clamps.
  Hypergraph skew(8, 3, {{0, 1, 2}, {0, 1, 3}, {4, 5, 6}});
  Tuning t = default_tuning(skew, 2);
  CHECK(t.delta == 1.0);
  CHECK(t.cap == doctest::Approx(std::sqrt(std::log(8.0))).epsilon(1e-14));

  CHECK_THROWS_AS(default_tuning(Hypergraph(8, 3, {}), 2), Error);
}

TEST_CASE("ratio embedding on a hand example") {
  Eigen::MatrixXd X(4, 2);
  X << 0.5, 0.5, 0.5, -0.5, 0.5, 0.5, 0.5, -0.5;
  ScoreEmbedding emb = score_embedding(make_factor(X), 5.0);
  REQUIRE(emb.rows.cols() == 1);
  CHECK(emb.rows(0, 0) == doctest::Approx(1.0));
  CHECK(emb.rows(1, 0) == doctest::Approx(-1.0));
  CHECK(emb.rows(2, 0) == doctest::Approx(1.0));
  CHECK(emb.rows(3, 0) == doctest::Approx(-1.0));
  CHECK(emb.truncated_count == 0);

  // A small cap shrinks every unit-ratio row onto it.
  ScoreEmbedding tight = score_embedding(make_factor(X), 0.5);
  CHECK(tight.truncated_count == 4);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(tight.rows(i, 0)) == doctest::Approx(0.5));
}

TEST_CASE("ratio embedding rescues rows with a vanishing leading entry") {
  Eigen::MatrixXd X(3, 2);
  X << 0, 1, 1, 0, 0, 0;
  ScoreEmbedding emb = score_embedding(make_factor(X), 2.0);
  CHECK(emb.rows(0, 0) == doctest::Approx(2.0));  // cap-length tail direction
  CHECK(emb.rows(1, 0) == doctest::Approx(0.0));
  CHECK(emb.rows(2, 0) == doctest::Approx(0.0));  // nothing to point along
  CHECK(emb.truncated_count == 2);
}

TEST_CASE("ratio embedding ignores eigenvector sign choices") {
  Eigen::MatrixXd U = testutil::random_orthonormal(10, 3, 21);
  ScoreEmbedding a = score_embedding(make_factor(U), 3.0);
  Eigen::MatrixXd V = U;
  V.col(0) = -V.col(0);
  V.col(2) = -V.col(2);
  ScoreEmbedding b = score_embedding(make_factor(V), 3.0);
  CHECK(testutil::max_abs_diff(a.rows, b.rows) == 0.0);
  CHECK(a.truncated_count == b.truncated_count);
}

TEST_CASE("ratio embedding input validation") {
  Eigen::MatrixXd X = testutil::random_orthonormal(6, 2, 22);
  CHECK_THROWS_AS(score_embedding(make_factor(X), 0.0), DimensionError);
  CHECK_THROWS_AS(score_embedding(make_factor(X), std::numeric_limits<double>::infinity()),
                  DimensionError);
  Eigen::MatrixXd one = testutil::random_orthonormal(6, 1, 23);
  CHECK_THROWS_AS(score_embedding(make_factor(one), 1.0), DimensionError);
}

TEST_CASE("k-means recovers separated clusters deterministically") {
  Eigen::MatrixXd pts(9, 2);
  std::vector<int> truth = {0, 0, 0, 1, 1, 1, 2, 2, 2};
  for (int i = 0; i < 9; ++i) {
    const double jitter = 0.05 * rng::uniform(77, static_cast<std::uint64_t>(i));
    pts.row(i) << 3.0 * truth[i] + jitter, -2.0 * truth[i];
  }
  KmeansResult a = kmeans(pts, 3, 10, 5);
  CHECK(clustering_error(a.partition.labels, truth).misclassified == 0);
  CHECK(a.partition.k == 3);

  KmeansResult b = kmeans(pts, 3, 10, 5);
  CHECK(a.partition.labels == b.partition.labels);
  CHECK(a.objective == b.objective);

  // More restarts can only improve the kept objective.
  KmeansResult single = kmeans(pts, 3, 1, 5);
  CHECK(a.objective <= single.objective + 1e-12);
}

TEST_CASE("k-means degenerate inputs") {
  CHECK_THROWS_AS(kmeans(Eigen::MatrixXd::Zero(2, 2), 3, 1, 1), DimensionError);
  CHECK_THROWS_AS(kmeans(Eigen::MatrixXd::Zero(4, 2), 2, 0, 1), DimensionError);
  Eigen::MatrixXd nf = Eigen::MatrixXd::Zero(4, 2);
  nf(1, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(kmeans(nf, 2, 1, 1), DimensionError);

  // All points coincide: clusters are degenerate but the call still settles.
  KmeansResult same = kmeans(Eigen::MatrixXd::Ones(6, 2), 2, 3, 1);
  CHECK(same.objective == 0.0);
}

TEST_CASE("initialization names round-trip") {
  for (InitKind k : {InitKind::diag_removed_hosvd, InitKind::hosvd,
                     InitKind::randomized_projection, InitKind::nhcut, InitKind::explicit_factor})
    CHECK(init_from_name(init_name(k)) == k);
  CHECK(init_from_name("default") == InitKind::diag_removed_hosvd);
  CHECK(init_from_name("rgp") == InitKind::randomized_projection);
  CHECK_THROWS_AS(init_from_name("bogus"), Error);
}

TEST_CASE("full detection recovers planted communities") {
  HdcbmParams p = separated_params(45, 3, 0);
  Hypergraph h = sample_hdcbm(p, 404);

  DetectOptions opts;
  opts.K = 3;
  DetectResult res = tensor_score(h, opts);
  CHECK(clustering_error(res.partition.labels, p.labels).misclassified == 0);
  CHECK_FALSE(res.partition.flagged);
  CHECK(res.diagnostics.init == std::string("diag-removed-hosvd"));
  CHECK(res.diagnostics.hooi_iterations >= 1);
  CHECK(res.diagnostics.spectrum.size() == 3);

  Tuning t = default_tuning(h, 3);
  CHECK(res.diagnostics.delta == t.delta);
  CHECK(res.diagnostics.cap == t.cap);

  // Identical options give identical output.
  DetectResult again = tensor_score(h, opts);
  CHECK(res.partition.labels == again.partition.labels);

  // Every initialization lands on the same clean partition here.
  for (InitKind k :
       {InitKind::hosvd, InitKind::randomized_projection, InitKind::nhcut}) {
    DetectOptions o = opts;
    o.init = k;
    CHECK(clustering_error(tensor_score(h, o).partition.labels, p.labels).misclassified == 0);
  }
}

TEST_CASE("detection honors explicit overrides") {
  HdcbmParams p = separated_params(30, 2, 1);
  Hypergraph h = sample_hdcbm(p, 405);

  DetectOptions opts;
  opts.K = 2;
  opts.delta = 0.9;
  opts.cap = 3.5;
  DetectResult res = tensor_score(h, opts);
  CHECK(res.diagnostics.delta == 0.9);
  CHECK(res.diagnostics.cap == 3.5);

  OracleEigens eig = oracle_eigens(p);
  DetectOptions ex;
  ex.K = 2;
  ex.init = InitKind::explicit_factor;
  ex.explicit_init = eig.xi;
  CHECK(clustering_error(tensor_score(h, ex).partition.labels, p.labels).misclassified == 0);

  // Stage wrappers rethrow as the base error type with a stage prefix.
  ex.explicit_init.reset();
  try {
    tensor_score(h, ex);
    FAIL("expected a missing-initialization failure");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).rfind("initialization:", 0) == 0);
  }
}

TEST_CASE("pipeline errors carry their stage name") {
  DetectOptions opts;
  opts.K = 2;
  try {
    tensor_score(Hypergraph(10, 3, {}), opts);
    FAIL("expected a tuning failure");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).rfind("tuning:", 0) == 0);
  }
}

TEST_CASE("normalized-cut initialization is orthonormal and flags isolation") {
  HdcbmParams p = separated_params(24, 2, 2);
  Hypergraph h = sample_hdcbm(p, 406);
  FactorMatrix f = nhcut_init(h, 2);
  CHECK((f.mat.transpose() * f.mat - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() <
        1e-10);

  // Adding a node that touches nothing sets the isolation flag.
  std::vector<std::vector<std::uint32_t>> edges;
  for (std::size_t e = 0; e < h.edge_count(); ++e)
    edges.emplace_back(h.edge(e).begin(), h.edge(e).end());
  Hypergraph plus(h.node_count() + 1, 3, edges);
  CHECK(nhcut_init(plus, 2).flagged);
}

TEST_CASE("baselines recover a clean planted graph model") {
  HdcbmParams p{40, 2, 2, testutil::block_labels(40, 2), Eigen::VectorXd::Constant(40, 0.9),
                CoreTensor::symmetric_sbm(2, 2, 0.05)};
  Hypergraph h = sample_hdcbm(p, 407);
  for (BaselineMethod m :
       {BaselineMethod::binary_projection_score, BaselineMethod::weighted_projection_score,
        BaselineMethod::nhcut, BaselineMethod::hosvd_kmeans}) {
    Partition part = baseline_detect(h, 2, m, 11);
    CHECK(clustering_error(part.labels, p.labels).misclassified == 0);
  }
  CHECK(std::string(baseline_name(BaselineMethod::nhcut)) == "nhcut");
  CHECK_THROWS_AS(baseline_detect(h, 1, BaselineMethod::nhcut, 11), DimensionError);
}

TEST_CASE("stacking one order reproduces single-order detection") {
  HdcbmParams p = separated_params(36, 2, 3);
  Hypergraph h = sample_hdcbm(p, 408);
  DetectOptions opts;
  opts.K = 2;
  Partition stacked = stacked_score({h}, opts);
  DetectResult single = tensor_score(h, opts);
  CHECK(stacked.labels == single.partition.labels);

  // Two orders over the same nodes both inform the embedding.
  HdcbmParams p3 = p;
  p3.m = 3;
  p3.core = CoreTensor::symmetric_sbm(2, 3, 0.02);
  Hypergraph h3 = sample_hdcbm(p3, 409);
  Partition both = stacked_score({h, h3}, opts);
  CHECK(clustering_error(both.labels, p.labels).misclassified == 0);

  Hypergraph other = testutil::random_hypergraph(20, 3, 0.1, 410);
  CHECK_THROWS_AS(stacked_score({h, other}, opts), DimensionError);
  CHECK_THROWS_AS(stacked_score({}, opts), DimensionError);
}

TEST_CASE("dummy-node lift on a hand example") {
  EdgeList list;
  list.n = 3;
  list.edges = {{0, 1}, {0, 1, 2}};
  Hypergraph lifted = dummy_node_lift(list, 4);
  CHECK(lifted.node_count() == 5);
  CHECK(lifted.order() == 4);
  REQUIRE(lifted.edge_count() == 2);
  // Stored edges are kept in lexicographic order.
  CHECK(std::vector<std::uint32_t>(lifted.edge(0).begin(), lifted.edge(0).end()) ==
        std::vector<std::uint32_t>({0, 1, 2, 4}));
  CHECK(std::vector<std::uint32_t>(lifted.edge(1).begin(), lifted.edge(1).end()) ==
        std::vector<std::uint32_t>({0, 1, 3, 4}));

  EdgeList big;
  big.n = 3;
  big.edges = {{0, 1, 2}};
  CHECK_THROWS_AS(dummy_node_lift(big, 2), InvalidHyperedgeError);
  EdgeList empty;
  empty.n = 3;
  CHECK_THROWS_AS(dummy_node_lift(empty, 3), Error);
}

TEST_CASE("nonuniform detection handles mixed and uniform lists") {
  HdcbmParams p = separated_params(36, 2, 4);
  Hypergraph h3 = sample_hdcbm(p, 411);
  HdcbmParams p2 = p;
  p2.m = 2;
  p2.core = CoreTensor::symmetric_sbm(2, 2, 0.05);
  Hypergraph h2 = sample_hdcbm(p2, 412);

  EdgeList mixed;
  mixed.n = 36;
  for (std::size_t e = 0; e < h3.edge_count(); ++e)
    mixed.edges.emplace_back(h3.edge(e).begin(), h3.edge(e).end());
  for (std::size_t e = 0; e < h2.edge_count(); ++e)
    mixed.edges.emplace_back(h2.edge(e).begin(), h2.edge(e).end());

  DetectOptions opts;
  opts.K = 2;
  DetectResult res = tensor_score_nonuniform(mixed, opts);
  CHECK(static_cast<int>(res.partition.labels.size()) == 36);
  CHECK(clustering_error(res.partition.labels, p.labels).misclassified == 0);

  // An already-uniform list matches plain detection on the same edges.
  EdgeList uni;
  uni.n = 36;
  for (std::size_t e = 0; e < h3.edge_count(); ++e)
    uni.edges.emplace_back(h3.edge(e).begin(), h3.edge(e).end());
  DetectResult direct = tensor_score_nonuniform(uni, opts);
  CHECK(clustering_error(direct.partition.labels, p.labels).misclassified == 0);
}

TEST_SUITE_END();
