#include "hyperclust/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "hyperclust/errors.hpp"

namespace hyperclust {

namespace detail {

std::int64_t best_matches_exhaustive(const Eigen::MatrixXi& confusion, std::vector<int>& perm) {
  const int K = static_cast<int>(confusion.rows());
  std::vector<int> p(K);
  std::iota(p.begin(), p.end(), 0);
  std::int64_t best = -1;
  do {
    std::int64_t total = 0;
    for (int c = 0; c < K; ++c) total += confusion(p[c], c);
    if (total > best) {
      best = total;
      perm = p;
    }
  } while (std::next_permutation(p.begin(), p.end()));
  return best;
}

std::int64_t best_matches_assignment(const Eigen::MatrixXi& confusion, std::vector<int>& perm) {
  // Potential-based shortest augmenting paths on the minimization form
  // cost(t, c) = -confusion(t, c); 1-based arrays, column 0 is a sentinel.
  const int K = static_cast<int>(confusion.rows());
  const std::int64_t inf = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<std::int64_t> u(K + 1, 0), v(K + 1, 0), minv(K + 1);
  std::vector<int> p(K + 1, 0), way(K + 1, 0);
  std::vector<char> used(K + 1);

  for (int i = 1; i <= K; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      std::int64_t delta = inf;
      int j1 = 0;
      for (int j = 1; j <= K; ++j) {
        if (used[j]) continue;
        const std::int64_t cur = -confusion(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= K; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }

  perm.assign(K, 0);
  std::int64_t total = 0;
  for (int j = 1; j <= K; ++j) {
    perm[j - 1] = p[j] - 1;  // column j-1 (predicted) matched to row p[j]-1 (true)
    total += confusion(p[j] - 1, j - 1);
  }
  return total;
}

}  // namespace detail

ErrorReport clustering_error(const std::vector<int>& predicted, const std::vector<int>& truth) {
  if (predicted.size() != truth.size())
    throw DimensionError("label vectors must have equal length");
  if (truth.empty()) throw DimensionError("label vectors must be nonempty");

  int K = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 0 || predicted[i] < 0) throw DimensionError("labels must be nonnegative");
    K = std::max({K, truth[i] + 1, predicted[i] + 1});
  }

  ErrorReport rep;
  rep.confusion = Eigen::MatrixXi::Zero(K, K);
  for (std::size_t i = 0; i < truth.size(); ++i) ++rep.confusion(truth[i], predicted[i]);

  std::int64_t matches = K <= 8 ? detail::best_matches_exhaustive(rep.confusion, rep.best_permutation)
                                : detail::best_matches_assignment(rep.confusion, rep.best_permutation);
  rep.misclassified = static_cast<std::int64_t>(truth.size()) - matches;
  rep.rate = static_cast<double>(rep.misclassified) / static_cast<double>(truth.size());
  return rep;
}

RunSummary aggregate_runs(const std::vector<ErrorReport>& runs) {
  if (runs.empty()) throw DimensionError("cannot aggregate zero runs");
  RunSummary s;
  s.count = static_cast<int>(runs.size());
  s.min_rate = runs.front().rate;
  s.max_rate = runs.front().rate;
  double sum = 0;
  for (const auto& r : runs) {
    sum += r.rate;
    s.min_rate = std::min(s.min_rate, r.rate);
    s.max_rate = std::max(s.max_rate, r.rate);
  }
  s.mean_rate = sum / s.count;
  double sq = 0;
  for (const auto& r : runs) sq += (r.rate - s.mean_rate) * (r.rate - s.mean_rate);
  s.std_rate = std::sqrt(sq / s.count);
  return s;
}

std::string format_rate_percent(double rate) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f%%", rate * 100.0);
  return buf;
}

}  // namespace hyperclust
