#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "hyperclust/hypergraph.hpp"

namespace hyperclust {

// Fully materialized order-m cubical tensor with dimension n per mode.
// Entries sit in lexicographic order with the last index fastest. This type
// backs brute-force reference computations and the population (signal)
// tensor at small n; it refuses shapes above 2^27 entries.
class DenseTensor {
 public:
  DenseTensor(int order, int dim);  // zeros
  static DenseTensor from_hypergraph(const Hypergraph& h);

  int order() const { return m_; }
  int dim() const { return n_; }
  double& at(std::span<const int> idx);
  double at(std::span<const int> idx) const;
  double& at(std::initializer_list<int> idx) { return at(std::span<const int>(idx.begin(), idx.size())); }
  double at(std::initializer_list<int> idx) const {
    return at(std::span<const int>(idx.begin(), idx.size()));
  }
  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  // Matricization along the first mode: row i1, column i2 + n*i3 + ... .
  Eigen::MatrixXd unfold1() const;

  // Contract every mode but the first against the columns of X (n x K);
  // column k2 + K*k3 + ... of the result pairs mode j with column kj.
  Eigen::MatrixXd contract_all_but_one(const Eigen::MatrixXd& X) const;

  // Contract modes 3..m against a single vector, leaving an n x n matrix.
  Eigen::MatrixXd contract_to_matrix(const Eigen::VectorXd& v) const;

  // Contract modes 3..m against the columns of X, leaving n x (n * K^(m-2))
  // with column i2 + n*(k3 + K*k4 + ...).
  Eigen::MatrixXd contract_modes3_up(const Eigen::MatrixXd& X) const;

 private:
  int m_;
  int n_;
  std::vector<double> data_;
};

}  // namespace hyperclust
