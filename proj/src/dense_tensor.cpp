#include "hyperclust/dense_tensor.hpp"

#include <algorithm>
#include <numeric>

#include "hyperclust/errors.hpp"

namespace hyperclust {

namespace {

constexpr std::uint64_t kMaxEntries = std::uint64_t{1} << 27;

std::uint64_t checked_size(int order, int dim) {
  if (order < 2) throw DimensionError("tensor order must be at least 2");
  if (dim < 1) throw DimensionError("tensor dimension must be positive");
  std::uint64_t total = 1;
  for (int j = 0; j < order; ++j) {
    total *= static_cast<std::uint64_t>(dim);
    if (total > kMaxEntries)
      throw DimensionError("dense tensor of " + std::to_string(dim) + "^" +
                           std::to_string(order) + " entries exceeds the dense limit");
  }
  return total;
}

// Odometer over m indices in [0,n); returns false after the last tuple.
bool advance(std::vector<int>& idx, int n) {
  for (int j = static_cast<int>(idx.size()) - 1; j >= 0; --j) {
    if (++idx[j] < n) return true;
    idx[j] = 0;
  }
  return false;
}

}  // namespace

DenseTensor::DenseTensor(int order, int dim)
    : m_(order), n_(dim), data_(checked_size(order, dim), 0.0) {}

DenseTensor DenseTensor::from_hypergraph(const Hypergraph& h) {
  DenseTensor t(h.order(), h.node_count());
  const int m = h.order();
  std::vector<int> perm(m);
  for (std::size_t e = 0; e < h.edge_count(); ++e) {
    auto edge = h.edge(e);
    for (int j = 0; j < m; ++j) perm[j] = static_cast<int>(edge[j]);
    std::sort(perm.begin(), perm.end());
    do {
      t.at(std::span<const int>(perm.data(), perm.size())) = 1.0;
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return t;
}

namespace {

std::size_t flat_index(std::span<const int> idx, int m, int n) {
  if (static_cast<int>(idx.size()) != m) throw DimensionError("index arity mismatch");
  std::size_t flat = 0;
  for (int j = 0; j < m; ++j) {
    if (idx[j] < 0 || idx[j] >= n) throw DimensionError("tensor index out of range");
    flat = flat * static_cast<std::size_t>(n) + static_cast<std::size_t>(idx[j]);
  }
  return flat;
}

}  // namespace

double& DenseTensor::at(std::span<const int> idx) { return data_[flat_index(idx, m_, n_)]; }

double DenseTensor::at(std::span<const int> idx) const { return data_[flat_index(idx, m_, n_)]; }

Eigen::MatrixXd DenseTensor::unfold1() const {
  std::size_t cols = data_.size() / static_cast<std::size_t>(n_);
  Eigen::MatrixXd out(n_, static_cast<Eigen::Index>(cols));
  std::vector<int> idx(m_, 0);
  std::size_t flat = 0;
  do {
    std::size_t col = 0;
    for (int j = m_ - 1; j >= 1; --j) col = col * static_cast<std::size_t>(n_) + idx[j];
    out(idx[0], static_cast<Eigen::Index>(col)) = data_[flat];
    ++flat;
  } while (advance(idx, n_));
  return out;
}

Eigen::MatrixXd DenseTensor::contract_all_but_one(const Eigen::MatrixXd& X) const {
  if (X.rows() != n_) throw DimensionError("factor rows must match tensor dimension");
  const int K = static_cast<int>(X.cols());
  std::size_t cols = 1;
  for (int j = 1; j < m_; ++j) cols *= static_cast<std::size_t>(K);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n_, static_cast<Eigen::Index>(cols));

  std::vector<int> idx(m_, 0);
  std::vector<int> ks(m_ - 1, 0);
  std::size_t flat = 0;
  do {
    double v = data_[flat++];
    if (v == 0.0) continue;
    std::fill(ks.begin(), ks.end(), 0);
    do {
      double prod = v;
      std::size_t col = 0;
      for (int j = m_ - 2; j >= 0; --j) {
        prod *= X(idx[j + 1], ks[j]);
        col = col * static_cast<std::size_t>(K) + static_cast<std::size_t>(ks[j]);
      }
      out(idx[0], static_cast<Eigen::Index>(col)) += prod;
    } while (advance(ks, K));
  } while (advance(idx, n_));
  return out;
}

Eigen::MatrixXd DenseTensor::contract_to_matrix(const Eigen::VectorXd& v) const {
  if (v.size() != n_) throw DimensionError("vector length must match tensor dimension");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n_, n_);
  std::vector<int> idx(m_, 0);
  std::size_t flat = 0;
  do {
    double val = data_[flat++];
    if (val == 0.0) continue;
    for (int j = 2; j < m_; ++j) val *= v(idx[j]);
    out(idx[0], idx[1]) += val;
  } while (advance(idx, n_));
  return out;
}

Eigen::MatrixXd DenseTensor::contract_modes3_up(const Eigen::MatrixXd& X) const {
  if (m_ < 3) throw DimensionError("contraction over modes 3.. needs order >= 3");
  if (X.rows() != n_) throw DimensionError("factor rows must match tensor dimension");
  const int K = static_cast<int>(X.cols());
  std::size_t kcols = 1;
  for (int j = 2; j < m_; ++j) kcols *= static_cast<std::size_t>(K);
  Eigen::MatrixXd out =
      Eigen::MatrixXd::Zero(n_, static_cast<Eigen::Index>(kcols * static_cast<std::size_t>(n_)));

  std::vector<int> idx(m_, 0);
  std::vector<int> ks(m_ - 2, 0);
  std::size_t flat = 0;
  do {
    double v = data_[flat++];
    if (v == 0.0) continue;
    std::fill(ks.begin(), ks.end(), 0);
    do {
      double prod = v;
      std::size_t kidx = 0;
      for (int j = m_ - 3; j >= 0; --j) {
        prod *= X(idx[j + 2], ks[j]);
        kidx = kidx * static_cast<std::size_t>(K) + static_cast<std::size_t>(ks[j]);
      }
      std::size_t col = static_cast<std::size_t>(idx[1]) + static_cast<std::size_t>(n_) * kidx;
      out(idx[0], static_cast<Eigen::Index>(col)) += prod;
    } while (advance(ks, K));
  } while (advance(idx, n_));
  return out;
}

}  // namespace hyperclust
