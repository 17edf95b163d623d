#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "hyperclust/errors.hpp"
#include "hyperclust/eval.hpp"
#include "hyperclust/rng.hpp"

using namespace hyperclust;

namespace {

Eigen::MatrixXi random_confusion(int k, std::uint64_t seed, int hi = 30) {
  Eigen::MatrixXi c(k, k);
  std::uint64_t counter = 0;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      c(i, j) = static_cast<int>(rng::uniform(seed, counter++) * hi);
  return c;
}

ErrorReport report_with_rate(double rate) {
  ErrorReport r;
  r.rate = rate;
  r.misclassified = static_cast<std::int64_t>(rate * 100);
  return r;
}

}  // namespace

TEST_SUITE_BEGIN("eval");

TEST_CASE("identical labelings have zero error") {
  std::vector<int> labels = {0, 1, 2, 0, 1, 2, 2};
  ErrorReport r = clustering_error(labels, labels);
  CHECK(r.misclassified == 0);
  CHECK(r.rate == 0.0);
  REQUIRE(r.best_permutation.size() == 3);
  for (int p = 0; p < 3; ++p) CHECK(r.best_permutation[p] == p);
  CHECK(r.confusion(0, 0) == 2);
  CHECK(r.confusion(2, 2) == 3);
  CHECK(r.confusion(0, 1) == 0);
}

TEST_CASE("relabeled partitions also have zero error") {
  std::vector<int> truth = {0, 0, 1, 1, 2, 2};
  std::vector<int> pred = {2, 2, 0, 0, 1, 1};
  ErrorReport r = clustering_error(pred, truth);
  CHECK(r.misclassified == 0);
  CHECK(r.best_permutation[2] == 0);  // predicted 2 plays true 0
  CHECK(r.best_permutation[0] == 1);
  CHECK(r.best_permutation[1] == 2);
}

TEST_CASE("counts on a hand-worked mismatch") {
  std::vector<int> truth = {0, 0, 0, 1, 1, 1};
  std::vector<int> pred = {0, 0, 1, 1, 1, 1};
  ErrorReport r = clustering_error(pred, truth);
  CHECK(r.misclassified == 1);
  CHECK(r.rate == doctest::Approx(1.0 / 6.0));

  // Predictions may use more labels than the truth does.
  std::vector<int> truth2 = {0, 0, 1, 1};
  std::vector<int> pred2 = {0, 1, 2, 2};
  ErrorReport r2 = clustering_error(pred2, truth2);
  CHECK(r2.misclassified == 1);
  CHECK(r2.rate == doctest::Approx(0.25));
  CHECK(r2.confusion.rows() == 3);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(clustering_error({0, 1}, {0, 1, 1}), DimensionError);
  CHECK_THROWS_AS(clustering_error({}, {}), DimensionError);
  CHECK_THROWS_AS(clustering_error({0, -1}, {0, 1}), DimensionError);
}

TEST_CASE("matching routes agree on random confusion matrices") {
  for (int k = 2; k <= 6; ++k)
    for (int trial = 0; trial < 40; ++trial) {
      Eigen::MatrixXi c = random_confusion(k, 1000 + 100 * k + trial);
      std::vector<int> pe, pa;
      std::int64_t e = detail::best_matches_exhaustive(c, pe);
      std::int64_t a = detail::best_matches_assignment(c, pa);
      CHECK(e == a);
      // Both argmaxes are genuine permutations achieving the optimum.
      std::int64_t check = 0;
      std::vector<char> seen(k, 0);
      for (int p = 0; p < k; ++p) {
        check += c(pa[p], p);
        seen[pa[p]] = 1;
      }
      CHECK(check == a);
      for (int i = 0; i < k; ++i) CHECK(seen[i] == 1);
    }

  // The larger sizes route through the assignment solver; spot-check one.
  Eigen::MatrixXi c9 = random_confusion(9, 77);
  std::vector<int> pe, pa;
  CHECK(detail::best_matches_exhaustive(c9, pe) == detail::best_matches_assignment(c9, pa));
}

TEST_CASE("error is invariant to which route the label count selects") {
  // 10 labels forces the assignment path inside clustering_error.
  const int n = 400;
  std::vector<int> truth(n), pred(n);
  for (int i = 0; i < n; ++i) {
    truth[i] = i % 10;
    pred[i] = (i % 10 + 3) % 10;  // pure relabeling
  }
  ErrorReport r = clustering_error(pred, truth);
  CHECK(r.misclassified == 0);
}

TEST_CASE("aggregation of run rates") {
  std::vector<ErrorReport> runs = {report_with_rate(0.0), report_with_rate(0.25),
                                   report_with_rate(0.5)};
  RunSummary s = aggregate_runs(runs);
  CHECK(s.count == 3);
  CHECK(s.mean_rate == doctest::Approx(0.25));
  CHECK(s.std_rate == doctest::Approx(std::sqrt(0.125 / 3.0)));
  CHECK(s.min_rate == 0.0);
  CHECK(s.max_rate == 0.5);
  CHECK_THROWS_AS(aggregate_runs({}), DimensionError);
}

TEST_CASE("rate formatting") {
  CHECK(format_rate_percent(0.117) == "11.7%");
  CHECK(format_rate_percent(0.0) == "0.0%");
  CHECK(format_rate_percent(1.0) == "100.0%");
  CHECK(format_rate_percent(1.0 / 3.0) == "33.3%");
}

TEST_SUITE_END();
