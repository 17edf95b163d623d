#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "hyperclust/hypergraph.hpp"

namespace hyperclust {

struct WeightedGraph {
  int n = 0;
  Eigen::MatrixXd adjacency;  // symmetric, zero diagonal
};

// Node degrees of the adjacency tensor: (m-1)! times the number of edges
// containing the node, i.e. the mode-1 row sums.
std::vector<std::int64_t> degrees(const Hypergraph& h);

std::int64_t factorial(int k);

// Mode-1 unfolding of the adjacency tensor contracted against the columns of
// X on modes 2..m; result is n x K^(m-1) with column k2 + K*k3 + ... .
Eigen::MatrixXd contract_all_but_one(const Hypergraph& h, const Eigen::MatrixXd& X);

// Adjacency tensor contracted against v on modes 3..m; symmetric n x n with
// zero diagonal. For m = 2 this is the binary adjacency matrix.
Eigen::MatrixXd contract_to_matrix(const Hypergraph& h, const Eigen::VectorXd& v);

// Adjacency tensor contracted against the columns of X on modes 3..m,
// unfolded along mode 1: n x (n * K^(m-2)), column i2 + n*(k3 + K*k4 + ...).
// Requires m >= 3.
Eigen::MatrixXd contract_modes3_up(const Hypergraph& h, const Eigen::MatrixXd& X);

// Two-node projection: binary marks pairs that co-occur in some edge;
// weighted counts (m-2)! per ordered completion, i.e. the all-ones
// contraction of modes 3..m.
WeightedGraph project_graph(const Hypergraph& h, bool weighted);

// Gram matrix of the mode-1 unfolding, G = M1(A) M1(A)^T, computed from
// shared (m-1)-node tails. Diagonal equals the node degrees; optionally
// zeroed on request.
Eigen::MatrixXd cooccurrence_gram(const Hypergraph& h, bool remove_diagonal);

}  // namespace hyperclust
