#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace hyperclust {

struct ErrorReport {
  std::int64_t misclassified = 0;
  double rate = 0.0;
  std::vector<int> best_permutation;  // predicted label -> matched true label
  Eigen::MatrixXi confusion;          // true x predicted counts
};

// Fraction of nodes mislabeled under the best relabeling of the predicted
// communities. Label counts come from max label + 1; the permutation search
// is exhaustive up to 8 labels and assignment-based above that.
ErrorReport clustering_error(const std::vector<int>& predicted, const std::vector<int>& truth);

struct RunSummary {
  int count = 0;
  double mean_rate = 0.0;
  double std_rate = 0.0;  // population standard deviation
  double min_rate = 0.0;
  double max_rate = 0.0;
};

RunSummary aggregate_runs(const std::vector<ErrorReport>& runs);

// "11.7%" style, one decimal.
std::string format_rate_percent(double rate);

namespace detail {
// Both return the maximum total of confusion(perm[p], p) over permutations,
// writing the argmax into perm. The exhaustive route tries every permutation;
// the assignment route solves the equivalent matching problem in O(K^3).
std::int64_t best_matches_exhaustive(const Eigen::MatrixXi& confusion, std::vector<int>& perm);
std::int64_t best_matches_assignment(const Eigen::MatrixXi& confusion, std::vector<int>& perm);
}  // namespace detail

}  // namespace hyperclust
