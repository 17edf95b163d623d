#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "hyperclust/errors.hpp"
#include "hyperclust/model.hpp"
#include "oracles.hpp"

using namespace hyperclust;

namespace {

double core_at(const CoreTensor& c, std::initializer_list<int> idx) {
  return c.at(std::span<const int>(idx.begin(), idx.size()));
}

// Brute-force loss ratios straight from the materialized signal tensor.
InfoLossReport dense_information_loss(const HdcbmParams& p) {
  DenseTensor q = signal_tensor(p, true);
  Eigen::MatrixXd M1 = q.unfold1();
  Eigen::BDCSVD<Eigen::MatrixXd> h_svd(M1);
  Eigen::MatrixXd omega = q.contract_to_matrix(Eigen::VectorXd::Ones(p.n));
  Eigen::BDCSVD<Eigen::MatrixXd> g_svd(omega);
  InfoLossReport out;
  out.if_h = h_svd.singularValues()(p.K - 1) / h_svd.singularValues()(0);
  out.if_g = g_svd.singularValues()(p.K - 1) / g_svd.singularValues()(0);
  return out;
}

double dense_beta(const HdcbmParams& p) {
  DenseTensor q = signal_tensor(p, true);
  Eigen::MatrixXd M1 = q.unfold1();
  // Row sums over the last mode: group columns of the unfolding by the
  // indices i2..i_{m-1}; with the last index fastest in column order,
  // column = i2 + n i3 + ... so the last mode is the slowest block.
  double best = 0;
  const Eigen::Index nm2 = M1.cols() / p.n;
  for (Eigen::Index i1 = 0; i1 < p.n; ++i1)
    for (Eigen::Index prefix = 0; prefix < nm2; ++prefix) {
      double s = 0;
      for (Eigen::Index last = 0; last < p.n; ++last) s += M1(i1, prefix + last * nm2);
      best = std::max(best, s);
    }
  return best;
}

}  // namespace

TEST_SUITE_BEGIN("model");

TEST_CASE("core tensor constructors") {
  CoreTensor sbm = CoreTensor::symmetric_sbm(2, 3, 0.25);
  CHECK(core_at(sbm, {0, 0, 0}) == 1.0);
  CHECK(core_at(sbm, {1, 1, 1}) == 1.0);
  CHECK(core_at(sbm, {0, 1, 0}) == 0.25);

  CoreTensor planted = CoreTensor::planted(2, 3, {{"111", 0.6}, {"122", 0.3}});
  CHECK(core_at(planted, {0, 0, 0}) == 0.6);
  CHECK(core_at(planted, {0, 1, 1}) == 0.3);
  CHECK(core_at(planted, {1, 0, 1}) == 0.3);
  CHECK(core_at(planted, {1, 1, 0}) == 0.3);
  CHECK(core_at(planted, {1, 1, 1}) == 0.0);

  CHECK_THROWS_AS(CoreTensor::planted(2, 3, {{"12", 0.3}}), InvalidModelError);
  CHECK_THROWS_AS(CoreTensor::planted(2, 3, {{"131", 0.3}}), InvalidModelError);
  CHECK_THROWS_AS(CoreTensor::planted(2, 3, {{"112", 0.3}, {"211", 0.4}}), InvalidModelError);
  CHECK_NOTHROW(CoreTensor::planted(2, 3, {{"112", 0.3}, {"211", 0.3}}));

  // Explicit values must be supersymmetric.
  std::vector<double> bad(8, 0.2);
  bad[1] = 0.9;  // (0,0,1) without its permutations
  CHECK_THROWS_AS(CoreTensor(2, 3, bad), InvalidModelError);
}

TEST_CASE("model validation") {
  HdcbmParams p = testutil::random_params(10, 3, 2, 5);
  CHECK_NOTHROW(p.validate());

  HdcbmParams bad_label = p;
  bad_label.labels[0] = 2;
  CHECK_THROWS_AS(bad_label.validate(), InvalidModelError);

  HdcbmParams bad_theta = p;
  bad_theta.theta(3) = 0.0;
  CHECK_THROWS_AS(bad_theta.validate(), InvalidModelError);

  HdcbmParams bad_shape = p;
  bad_shape.m = 4;
  CHECK_THROWS_AS(bad_shape.validate(), InvalidModelError);
}

TEST_CASE("sampling is a deterministic function of seed and parameters") {
  HdcbmParams p = testutil::random_params(14, 3, 2, 21);
  Hypergraph a = sample_hdcbm(p, 99);
  Hypergraph b = sample_hdcbm(p, 99);
  Hypergraph c = sample_hdcbm(p, 100);
  CHECK(a.flat_edges() == b.flat_edges());
  CHECK(a.flat_edges() != c.flat_edges());
}

TEST_CASE("sampling degenerate probabilities") {
  // Probability one everywhere: the complete 3-uniform hypergraph.
  HdcbmParams ones{9, 3, 2, testutil::block_labels(9, 2), Eigen::VectorXd::Ones(9),
                   CoreTensor::constant(2, 3, 1.0)};
  CHECK(sample_hdcbm(ones, 3).edge_count() == 84);  // C(9,3)

  HdcbmParams zeros = ones;
  zeros.core = CoreTensor::constant(2, 3, 0.0);
  CHECK(sample_hdcbm(zeros, 3).edge_count() == 0);

  // A class with probability above one is rejected with its name.
  HdcbmParams hot = ones;
  hot.theta = Eigen::VectorXd::Constant(9, 1.2);
  hot.core = CoreTensor::planted(2, 3, {{"112", 0.7}});
  try {
    sample_hdcbm(hot, 3);
    FAIL("expected rejection");
  } catch (const InvalidModelError& e) {
    CHECK(std::string(e.what()).find("(1,1,2)") != std::string::npos);
  }

  // The same class is fine when no two nodes can realize it.
  HdcbmParams tiny = hot;
  tiny.labels.assign(9, 1);
  tiny.labels[0] = 0;  // community 1 has a single node, class (1,1,2) is vacuous
  CHECK_NOTHROW(sample_hdcbm(tiny, 3));
}

TEST_CASE("sampling respects a zeroed cross-community core") {
  HdcbmParams p{12, 2, 2, testutil::block_labels(12, 2), Eigen::VectorXd::Ones(12),
                CoreTensor::planted(2, 2, {{"11", 1.0}, {"22", 1.0}})};
  Hypergraph h = sample_hdcbm(p, 8);
  CHECK(h.edge_count() == 30);  // two complete halves, C(6,2) each
  for (std::size_t e = 0; e < h.edge_count(); ++e)
    CHECK(p.labels[h.edge(e)[0]] == p.labels[h.edge(e)[1]]);
}

TEST_CASE("sampled edge frequency tracks the tuple probability") {
  HdcbmParams p{6, 2, 2, testutil::block_labels(6, 2), Eigen::VectorXd::Constant(6, 0.9),
                CoreTensor::constant(2, 2, 0.4)};
  const double prob = 0.4 * 0.9 * 0.9;  // every tuple
  const int reps = 600;
  long total = 0;
  for (int r = 0; r < reps; ++r) total += static_cast<long>(sample_hdcbm(p, 5000 + r).edge_count());
  const double mean = static_cast<double>(total) / reps;
  const double expect = prob * 15.0;
  const double sigma = std::sqrt(15.0 * prob * (1 - prob) / reps);
  CHECK(std::abs(mean - expect) < 5 * sigma);
}

TEST_CASE("signal tensor entries") {
  HdcbmParams p{4, 2, 2, {0, 0, 1, 1}, Eigen::VectorXd::LinSpaced(4, 0.5, 0.8),
                CoreTensor::planted(2, 2, {{"11", 0.9}, {"12", 0.2}, {"22", 0.7}})};
  DenseTensor q = signal_tensor(p, true);
  CHECK(q.at({0, 1}) == doctest::Approx(0.9 * p.theta(0) * p.theta(1)).epsilon(1e-15));
  CHECK(q.at({0, 2}) == doctest::Approx(0.2 * p.theta(0) * p.theta(2)).epsilon(1e-15));
  CHECK(q.at({0, 0}) == doctest::Approx(0.9 * p.theta(0) * p.theta(0)).epsilon(1e-15));

  DenseTensor a = signal_tensor(p, false);
  CHECK(a.at({0, 0}) == 0.0);
  CHECK(a.at({2, 3}) == q.at({2, 3}));
}

TEST_CASE("population eigenstructure matches dense numerics") {
  for (int m = 2; m <= 4; ++m) {
    const int n = m == 4 ? 10 : 14;
    HdcbmParams p = testutil::random_params(n, m, 2, 60 + m);
    OracleEigens eig = oracle_eigens(p);

    // The factor really is orthonormal and community-block structured.
    CHECK(eig.xi.rows() == n);
    CHECK((eig.xi.mat.transpose() * eig.xi.mat - Eigen::MatrixXd::Identity(2, 2))
              .cwiseAbs()
              .maxCoeff() < 1e-12);

    // Its span and scale agree with a singular value decomposition of the
    // materialized signal tensor (diagonal included).
    Eigen::MatrixXd M1 = signal_tensor(p, true).unfold1();
    Eigen::BDCSVD<Eigen::MatrixXd> svd(M1, Eigen::ComputeThinU);
    for (int k = 0; k < p.K; ++k)
      CHECK(svd.singularValues()(k) == doctest::Approx(eig.lambdas(k)).epsilon(1e-10));
    CHECK(svd.singularValues()(p.K) < 1e-10 * svd.singularValues()(0));
    CHECK(subspace_distance(svd.matrixU().leftCols(p.K), eig.xi.mat) < 1e-10);
  }
}

TEST_CASE("population d values on a hand example") {
  Eigen::VectorXd theta(4);
  theta << 1, 2, 2, 1;
  HdcbmParams p{4, 2, 2, {0, 0, 1, 1}, theta, CoreTensor::constant(2, 2, 0.5)};
  // d_k^2 = (sum_{V_k} theta^2) / |theta|^2 = 5/10 each.
  p.core = CoreTensor::planted(2, 2, {{"11", 0.9}, {"12", 0.2}, {"22", 0.7}});
  OracleEigens eig = oracle_eigens(p);
  CHECK(eig.d(0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
  CHECK(eig.d(1) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
}

TEST_CASE("degenerate populations are reported") {
  HdcbmParams p = testutil::random_params(10, 3, 2, 61);
  p.labels.assign(10, 0);  // community 2 empty
  CHECK_THROWS_AS(oracle_eigens(p), DegenerateModelError);

  HdcbmParams flat = testutil::random_params(10, 3, 2, 62);
  flat.core = CoreTensor::constant(2, 3, 0.5);  // rank-1 core matrix
  CHECK_THROWS_AS(oracle_eigens(flat), DegenerateModelError);
}

TEST_CASE("information loss matches the dense reference") {
  for (int m = 2; m <= 4; ++m) {
    for (int trial = 0; trial < 3; ++trial) {
      const int n = m == 4 ? 9 : 12;
      HdcbmParams p = testutil::random_params(n, m, 2, 70 + 10 * m + trial);
      InfoLossReport fast = information_loss(p);
      InfoLossReport slow = dense_information_loss(p);
      CHECK(fast.if_h == doctest::Approx(slow.if_h).epsilon(1e-9));
      CHECK(fast.if_g == doctest::Approx(slow.if_g).epsilon(1e-9));
    }
  }
}

TEST_CASE("pairwise and tensor loss coincide for graphs") {
  HdcbmParams p = testutil::random_params(12, 2, 3, 80);
  InfoLossReport r = information_loss(p);
  CHECK(r.if_h == doctest::Approx(r.if_g).epsilon(1e-12));
}

TEST_CASE("rank-1 core matrix gives zero tensor headroom") {
  HdcbmParams p = testutil::random_params(12, 3, 2, 81, true);
  p.core = CoreTensor::constant(2, 3, 0.4);
  InfoLossReport r = information_loss(p);
  CHECK(r.if_h < 1e-12);
}

TEST_CASE("largest expected row sum matches the dense reference") {
  for (int m = 2; m <= 4; ++m)
    for (int trial = 0; trial < 3; ++trial) {
      const int n = m == 4 ? 9 : 12;
      HdcbmParams p = testutil::random_params(n, m, 3, 90 + 10 * m + trial);
      CHECK(beta_q(p) == doctest::Approx(dense_beta(p)).epsilon(1e-12));
    }
}

TEST_CASE("contracted minimum eigenvalue matches a direct construction") {
  for (int m = 2; m <= 4; ++m) {
    const int K = 3;
    HdcbmParams p = testutil::random_params(12, m, K, 95 + m);
    Eigen::VectorXd v = testutil::random_matrix(K, 1, 7).cwiseAbs() + Eigen::VectorXd::Ones(K);

    // Direct: materialize the d-scaled core as a dense tensor over K slots.
    OracleEigens eig = oracle_eigens(p);
    DenseTensor scaled(m, K);
    std::vector<int> idx(m, 0);
    bool more = true;
    while (more) {
      double val = p.core.at(std::span<const int>(idx.data(), idx.size()));
      for (int j = 0; j < m; ++j) val *= eig.d(idx[j]);
      scaled.at(std::span<const int>(idx.data(), idx.size())) = val;
      more = false;
      for (int j = m - 1; j >= 0; --j) {
        if (++idx[j] < K) {
          more = true;
          break;
        }
        idx[j] = 0;
      }
    }
    Eigen::MatrixXd B = scaled.contract_to_matrix(v);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B, Eigen::EigenvaluesOnly);
    const double want = es.eigenvalues().minCoeff() / std::pow(v.norm(), m - 2);
    CHECK(tilde_lambda_min(p, v) == doctest::Approx(want).epsilon(1e-12));

    // It lower-bounds the smallest singular value of the unfolded scaled core.
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(eig.G);
    CHECK(tilde_lambda_min(p, v) <= svd.singularValues()(K - 1) + 1e-12);
  }
}

TEST_CASE("degree weight samplers") {
  Eigen::VectorXd pw = theta_powerlaw(200, 2.5, 11);
  CHECK(pw.minCoeff() >= 0.2);
  CHECK(pw.maxCoeff() <= 1.0);
  CHECK(testutil::max_abs_diff(pw, theta_powerlaw(200, 2.5, 11)) == 0.0);
  CHECK(testutil::max_abs_diff(pw, theta_powerlaw(200, 2.5, 12)) > 0.0);

  Eigen::VectorXd pw1 = theta_powerlaw(200, 1.0, 11);  // log-uniform branch
  CHECK(pw1.minCoeff() >= 0.2);
  CHECK(pw1.maxCoeff() <= 1.0);

  Eigen::VectorXd ru = theta_reciprocal_uniform(200, 11);
  CHECK(ru.minCoeff() >= 1.0 / (8.0 * std::sqrt(5.0)));
  CHECK(ru.maxCoeff() <= 1.0 / std::sqrt(5.0));
}

TEST_CASE("identifiability rescaling preserves the signal tensor") {
  HdcbmParams p = testutil::random_params(10, 3, 2, 31);
  HdcbmParams r = identifiability_rescaled(p);
  for (int k = 0; k < p.K; ++k) CHECK(r.core.diagonal_entry(k) == doctest::Approx(1.0));
  Eigen::MatrixXd a = signal_tensor(p, true).unfold1();
  Eigen::MatrixXd b = signal_tensor(r, true).unfold1();
  CHECK(testutil::max_abs_diff(a, b) < 1e-12);
}

TEST_SUITE_END();
