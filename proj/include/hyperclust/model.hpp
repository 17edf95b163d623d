#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "hyperclust/dense_tensor.hpp"
#include "hyperclust/hypergraph.hpp"
#include "hyperclust/linalg.hpp"

namespace hyperclust {

// Supersymmetric order-m core tensor on K communities, stored as K^m values
// in lexicographic order (last index fastest). Entries are connection
// propensities between community tuples.
class CoreTensor {
 public:
  CoreTensor(int K, int m, std::vector<double> values);

  static CoreTensor constant(int K, int m, double c);
  // 1 on the all-equal diagonal, b elsewhere.
  static CoreTensor symmetric_sbm(int K, int m, double b);
  // Entries named by 1-based digit strings such as "122" (so K <= 9);
  // each key fixes the value on every permutation of that community tuple,
  // unnamed entries are zero.
  static CoreTensor planted(int K, int m, const std::map<std::string, double>& entries);

  int k() const { return K_; }
  int order() const { return m_; }
  double at(std::span<const int> idx) const;
  double at_flat(std::size_t flat) const { return values_[flat]; }
  const std::vector<double>& values() const { return values_; }
  double max_entry() const;
  double min_entry() const;
  double diagonal_entry(int k) const;  // value at (k,k,...,k)

 private:
  int K_;
  int m_;
  std::vector<double> values_;
};

struct HdcbmParams {
  int n = 0;
  int m = 0;
  int K = 0;
  std::vector<int> labels;  // size n, values in [0, K)
  Eigen::VectorXd theta;    // size n, positive
  CoreTensor core;

  void validate() const;
  std::vector<std::vector<int>> communities() const;
};

// Population eigenstructure of the signal tensor: with D the diagonal of
// per-community theta masses d_k = |theta|^{-1} (sum_{i in V_k} theta_i^2)^{1/2}
// and G the mode-1 unfolding of the core scaled by D on every mode, the
// planted factor is xi_k = |theta|^{-1} Theta Pi D^{-1} u_k with u_k the left
// singular vectors of G, and the tensor singular values are
// lambda_k = kappa_k |theta|^m.
struct OracleEigens {
  Eigen::VectorXd d;
  Eigen::MatrixXd G;        // K x K^(m-1)
  Eigen::VectorXd kappas;   // descending singular values of G
  Eigen::MatrixXd U;        // K x K left singular vectors, sign-fixed
  Eigen::VectorXd lambdas;  // kappa_k * |theta|^m
  FactorMatrix xi;          // n x K planted factor
};

struct InfoLossReport {
  double if_h;  // sigma_K / sigma_1 of the mode-1 unfolded signal tensor
  double if_g;  // sigma_K / sigma_1 of the all-ones pairwise projection
};

// Draw an m-uniform hypergraph: each sorted m-tuple of distinct nodes is an
// edge independently with probability core(labels) * prod theta. Throws when
// some tuple class has probability above one, naming the class.
Hypergraph sample_hdcbm(const HdcbmParams& p, std::uint64_t seed);

// Population tensor Q(i1..im) = core(labels) * prod theta; with
// include_diagonal=false, entries with any repeated index are zeroed,
// giving the expected adjacency tensor.
DenseTensor signal_tensor(const HdcbmParams& p, bool include_diagonal);

// K x K^(m-1) mode-1 unfolding of the core scaled by d on every mode.
Eigen::MatrixXd population_core_matrix(const HdcbmParams& p);

OracleEigens oracle_eigens(const HdcbmParams& p);

// Relative strength of the K-th direction kept by the tensor (if_h) versus
// the pairwise projection (if_g); if_g = 0 means pairwise methods are blind
// to one planted direction.
InfoLossReport information_loss(const HdcbmParams& p);

// Largest expected row sum of the signal tensor,
// max_{i1..i_{m-1}} sum_{i_m} Q, evaluated per community class.
double beta_q(const HdcbmParams& p);

// lambda_min(P* x3 v ... xm v) / |v|^(m-2) for the d-scaled core P*; for
// m = 2 this is the smallest eigenvalue of P* itself.
double tilde_lambda_min(const HdcbmParams& p, const Eigen::VectorXd& v);

// Degree weights with density proportional to theta^(-alpha) on [lo, hi].
Eigen::VectorXd theta_powerlaw(int n, double alpha, std::uint64_t seed, double lo = 0.2,
                               double hi = 1.0);
// theta_i = 1 / ((7 U + 1) sqrt(5)) with U uniform on (0,1).
Eigen::VectorXd theta_reciprocal_uniform(int n, std::uint64_t seed);

// Equivalent parameters with unit core diagonal: scales theta by
// core(k,..,k)^(1/m) per community and divides the core accordingly.
HdcbmParams identifiability_rescaled(const HdcbmParams& p);

}  // namespace hyperclust
