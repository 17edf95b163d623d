#include "hyperclust/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hyperclust/errors.hpp"
#include "hyperclust/rng.hpp"

namespace hyperclust {

namespace {

std::size_t checked_core_size(int K, int m) {
  if (K < 1) throw DimensionError("core needs at least one community");
  if (m < 2) throw DimensionError("core order must be at least 2");
  std::size_t total = 1;
  for (int j = 0; j < m; ++j) {
    total *= static_cast<std::size_t>(K);
    if (total > (std::size_t{1} << 24)) throw DimensionError("core tensor too large");
  }
  return total;
}

bool advance(std::vector<int>& idx, int n) {
  for (int j = static_cast<int>(idx.size()) - 1; j >= 0; --j) {
    if (++idx[j] < n) return true;
    idx[j] = 0;
  }
  return false;
}

std::string tuple_name(std::span<const int> ks) {
  std::string s = "(";
  for (std::size_t j = 0; j < ks.size(); ++j) {
    if (j) s += ",";
    s += std::to_string(ks[j] + 1);
  }
  return s + ")";
}

// out(a,b) = headscale(a) headscale(b) sum_{t3..tm} core(a,b,t) prod tailweight(t_j)
Eigen::MatrixXd pair_contraction(const CoreTensor& core, const Eigen::VectorXd& headscale,
                                 const Eigen::VectorXd& tailweight) {
  const int K = core.k();
  const int m = core.order();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(K, K);
  std::vector<int> idx(m, 0);
  std::size_t flat = 0;
  do {
    double v = core.at_flat(flat++);
    for (int j = 2; j < m; ++j) v *= tailweight(idx[j]);
    out(idx[0], idx[1]) += v;
  } while (advance(idx, K));
  for (int a = 0; a < K; ++a)
    for (int b = 0; b < K; ++b) out(a, b) *= headscale(a) * headscale(b);
  return out;
}

Eigen::VectorXd community_d(const HdcbmParams& p) {
  Eigen::VectorXd sq = Eigen::VectorXd::Zero(p.K);
  for (int i = 0; i < p.n; ++i) sq(p.labels[i]) += p.theta(i) * p.theta(i);
  return (sq / p.theta.squaredNorm()).cwiseSqrt();
}

// Reject models where some achievable tuple class has probability above one,
// using the largest theta values available inside each community.
void check_tuple_probabilities(const HdcbmParams& p) {
  const int K = p.K, m = p.m;
  std::vector<std::vector<double>> theta_desc(K);
  for (int i = 0; i < p.n; ++i) theta_desc[p.labels[i]].push_back(p.theta(i));
  for (auto& v : theta_desc) std::sort(v.begin(), v.end(), std::greater<>());

  std::vector<int> ms(m, 0);  // non-decreasing community tuple
  auto rec = [&](auto&& self, int j, int start) -> void {
    if (j == m) {
      double hi = p.core.at(std::span<const int>(ms.data(), ms.size()));
      bool achievable = true;
      int c = 0;
      while (c < m) {
        int c2 = c;
        while (c2 < m && ms[c2] == ms[c]) ++c2;
        int r = c2 - c;
        const auto& td = theta_desc[ms[c]];
        if (static_cast<int>(td.size()) < r) {
          achievable = false;
          break;
        }
        for (int t = 0; t < r; ++t) hi *= td[t];
        c = c2;
      }
      if (achievable && hi > 1.0)
        throw InvalidModelError("tuple class " + tuple_name({ms.data(), ms.size()}) +
                                " has probability " + std::to_string(hi) + " > 1");
      return;
    }
    for (int k = start; k < K; ++k) {
      ms[j] = k;
      self(self, j + 1, k);
    }
  };
  rec(rec, 0, 0);
}

}  // namespace

CoreTensor::CoreTensor(int K, int m, std::vector<double> values)
    : K_(K), m_(m), values_(std::move(values)) {
  std::size_t want = checked_core_size(K, m);
  if (values_.size() != want)
    throw DimensionError("core needs " + std::to_string(want) + " values, got " +
                         std::to_string(values_.size()));
  for (double v : values_)
    if (!std::isfinite(v)) throw InvalidModelError("core entry is not finite");
  std::vector<int> idx(m, 0), sorted(m);
  std::size_t flat = 0;
  do {
    sorted.assign(idx.begin(), idx.end());
    std::sort(sorted.begin(), sorted.end());
    std::size_t canon = 0;
    for (int j = 0; j < m; ++j) canon = canon * static_cast<std::size_t>(K) + sorted[j];
    if (std::abs(values_[flat] - values_[canon]) > 1e-12)
      throw InvalidModelError("core tensor is not supersymmetric");
    ++flat;
  } while (advance(idx, K));
}

CoreTensor CoreTensor::constant(int K, int m, double c) {
  return CoreTensor(K, m, std::vector<double>(checked_core_size(K, m), c));
}

CoreTensor CoreTensor::symmetric_sbm(int K, int m, double b) {
  std::vector<double> v(checked_core_size(K, m), b);
  for (int k = 0; k < K; ++k) {
    std::size_t flat = 0;
    for (int j = 0; j < m; ++j) flat = flat * static_cast<std::size_t>(K) + k;
    v[flat] = 1.0;
  }
  return CoreTensor(K, m, std::move(v));
}

CoreTensor CoreTensor::planted(int K, int m, const std::map<std::string, double>& entries) {
  if (K > 9) throw DimensionError("digit-string core entries support at most 9 communities");
  std::size_t total = checked_core_size(K, m);
  std::vector<double> v(total, 0.0);
  std::vector<bool> named(total, false);
  std::vector<int> idx(m);
  for (const auto& [key, val] : entries) {
    if (static_cast<int>(key.size()) != m)
      throw InvalidModelError("core key '" + key + "' needs " + std::to_string(m) + " digits");
    for (int j = 0; j < m; ++j) {
      if (key[j] < '1' || key[j] > '0' + K)
        throw InvalidModelError("core key '" + key + "' has digit outside 1.." +
                                std::to_string(K));
      idx[j] = key[j] - '1';
    }
    std::sort(idx.begin(), idx.end());
    std::size_t canon = 0;
    for (int j = 0; j < m; ++j) canon = canon * static_cast<std::size_t>(K) + idx[j];
    if (named[canon] && v[canon] != val)
      throw InvalidModelError("core key '" + key + "' conflicts with an earlier entry");
    do {
      std::size_t flat = 0;
      for (int j = 0; j < m; ++j) flat = flat * static_cast<std::size_t>(K) + idx[j];
      v[flat] = val;
      named[flat] = true;
    } while (std::next_permutation(idx.begin(), idx.end()));
  }
  return CoreTensor(K, m, std::move(v));
}

double CoreTensor::at(std::span<const int> idx) const {
  if (static_cast<int>(idx.size()) != m_) throw DimensionError("core index arity mismatch");
  std::size_t flat = 0;
  for (int j = 0; j < m_; ++j) {
    if (idx[j] < 0 || idx[j] >= K_) throw DimensionError("core index out of range");
    flat = flat * static_cast<std::size_t>(K_) + static_cast<std::size_t>(idx[j]);
  }
  return values_[flat];
}

double CoreTensor::max_entry() const { return *std::max_element(values_.begin(), values_.end()); }
double CoreTensor::min_entry() const { return *std::min_element(values_.begin(), values_.end()); }

double CoreTensor::diagonal_entry(int k) const {
  std::size_t flat = 0;
  for (int j = 0; j < m_; ++j) flat = flat * static_cast<std::size_t>(K_) + k;
  return values_[flat];
}

void HdcbmParams::validate() const {
  if (n < 1 || m < 2 || K < 1) throw InvalidModelError("need n >= 1, m >= 2, K >= 1");
  if (m > n) throw InvalidModelError("order m exceeds node count n");
  if (core.k() != K || core.order() != m) throw InvalidModelError("core shape mismatch");
  if (static_cast<int>(labels.size()) != n) throw InvalidModelError("labels size mismatch");
  for (int l : labels)
    if (l < 0 || l >= K) throw InvalidModelError("label outside [0, K)");
  if (theta.size() != n) throw InvalidModelError("theta size mismatch");
  for (int i = 0; i < n; ++i)
    if (!(theta(i) > 0) || !std::isfinite(theta(i)))
      throw InvalidModelError("theta must be positive and finite");
  if (core.min_entry() < 0) throw InvalidModelError("core entries must be nonnegative");
}

std::vector<std::vector<int>> HdcbmParams::communities() const {
  std::vector<std::vector<int>> out(K);
  for (int i = 0; i < n; ++i) out[labels[i]].push_back(i);
  return out;
}

Hypergraph sample_hdcbm(const HdcbmParams& p, std::uint64_t seed) {
  p.validate();
  check_tuple_probabilities(p);
  const int n = p.n, m = p.m, K = p.K;
  const double* core = p.core.values().data();

  std::vector<std::vector<std::uint32_t>> edges;
  std::vector<int> idx(m);
  std::uint64_t counter = 0;
  // Sorted tuples in lexicographic order; the counter advances once per
  // tuple, so the draw for a given tuple depends only on (seed, position).
  auto rec = [&](auto&& self, int j, int start, double prod, std::size_t flat) -> void {
    if (j == m - 1) {
      const double* row = core + flat * static_cast<std::size_t>(K);
      for (int i = start; i < n; ++i) {
        const double prob = prod * p.theta(i) * row[p.labels[i]];
        const double u = rng::uniform(seed, counter++);
        if (u < prob) {
          idx[m - 1] = i;
          edges.emplace_back(idx.begin(), idx.end());
        }
      }
      return;
    }
    for (int i = start; i <= n - (m - j); ++i) {
      idx[j] = i;
      self(self, j + 1, i + 1, prod * p.theta(i), flat * static_cast<std::size_t>(K) + p.labels[i]);
    }
  };
  rec(rec, 0, 0, 1.0, 0);
  return Hypergraph(n, m, edges);
}

DenseTensor signal_tensor(const HdcbmParams& p, bool include_diagonal) {
  p.validate();
  DenseTensor t(p.m, p.n);
  std::vector<int> idx(p.m, 0);
  std::vector<int> ks(p.m);
  std::size_t flat = 0;
  auto& data = t.data();
  do {
    bool repeated = false;
    for (int a = 0; a < p.m && !repeated; ++a)
      for (int b = a + 1; b < p.m; ++b)
        if (idx[a] == idx[b]) {
          repeated = true;
          break;
        }
    if (repeated && !include_diagonal) {
      ++flat;
      continue;
    }
    double v = 1.0;
    for (int j = 0; j < p.m; ++j) {
      v *= p.theta(idx[j]);
      ks[j] = p.labels[idx[j]];
    }
    data[flat++] = v * p.core.at(std::span<const int>(ks.data(), ks.size()));
  } while (advance(idx, p.n));
  return t;
}

Eigen::MatrixXd population_core_matrix(const HdcbmParams& p) {
  p.validate();
  const int K = p.K, m = p.m;
  const Eigen::VectorXd d = community_d(p);
  std::size_t cols = 1;
  for (int j = 1; j < m; ++j) cols *= static_cast<std::size_t>(K);
  Eigen::MatrixXd G(K, static_cast<Eigen::Index>(cols));
  std::vector<int> idx(m, 0);
  std::size_t flat = 0;
  do {
    double v = p.core.at_flat(flat++);
    for (int j = 0; j < m; ++j) v *= d(idx[j]);
    std::size_t col = 0;
    for (int j = m - 1; j >= 1; --j) col = col * static_cast<std::size_t>(K) + idx[j];
    G(idx[0], static_cast<Eigen::Index>(col)) = v;
  } while (advance(idx, K));
  return G;
}

OracleEigens oracle_eigens(const HdcbmParams& p) {
  p.validate();
  OracleEigens out;
  out.d = community_d(p);
  for (int k = 0; k < p.K; ++k)
    if (!(out.d(k) > 0)) throw DegenerateModelError("community " + std::to_string(k + 1) +
                                                    " is empty");
  out.G = population_core_matrix(p);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(out.G, Eigen::ComputeThinU);
  out.kappas = svd.singularValues().head(p.K);
  if (out.kappas(p.K - 1) <= 1e-12)
    throw DegenerateModelError("population core matrix is rank deficient");
  out.U = svd.matrixU().leftCols(p.K);
  apply_sign_convention(out.U);

  const double tnorm = p.theta.norm();
  out.lambdas = out.kappas * std::pow(tnorm, p.m);

  Eigen::MatrixXd xi(p.n, p.K);
  for (int i = 0; i < p.n; ++i) {
    const int l = p.labels[i];
    xi.row(i) = (p.theta(i) / (tnorm * out.d(l))) * out.U.row(l);
  }
  out.xi = make_factor(std::move(xi));
  return out;
}

InfoLossReport information_loss(const HdcbmParams& p) {
  p.validate();
  const Eigen::VectorXd d = community_d(p);

  Eigen::MatrixXd G = population_core_matrix(p);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(G);
  const Eigen::VectorXd kap = svd.singularValues();
  InfoLossReport out;
  out.if_h = kap(0) > 0 ? kap(p.K - 1) / kap(0) : 0.0;

  // The all-ones contraction of the signal tensor is (Theta Pi) C (Theta Pi)^T
  // with C the core contracted against per-community theta sums, so its
  // nonzero spectrum matches D C D up to the positive factor |theta|^2.
  Eigen::VectorXd s = Eigen::VectorXd::Zero(p.K);
  for (int i = 0; i < p.n; ++i) s(p.labels[i]) += p.theta(i);
  Eigen::MatrixXd M = pair_contraction(p.core, d, s);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
  Eigen::VectorXd mags = es.eigenvalues().cwiseAbs();
  std::sort(mags.data(), mags.data() + mags.size(), std::greater<double>());
  out.if_g = mags(0) > 0 ? mags(p.K - 1) / mags(0) : 0.0;
  return out;
}

double beta_q(const HdcbmParams& p) {
  p.validate();
  const int K = p.K, m = p.m;
  Eigen::VectorXd s = Eigen::VectorXd::Zero(K);
  Eigen::VectorXd tmax = Eigen::VectorXd::Zero(K);
  std::vector<int> count(K, 0);
  for (int i = 0; i < p.n; ++i) {
    const int l = p.labels[i];
    s(l) += p.theta(i);
    tmax(l) = std::max(tmax(l), p.theta(i));
    ++count[l];
  }

  // Row sums of the signal tensor depend on (i1..i_{m-1}) only through the
  // community tuple and the theta product, which is maximized by the largest
  // theta of each community; prefix indices may repeat freely.
  double best = 0.0;
  std::vector<int> ms(m - 1);
  auto rec = [&](auto&& self, int j, int start, double tprod, std::size_t flat) -> void {
    if (j == m - 1) {
      if (tprod == 0.0) return;
      double row = 0.0;
      const std::size_t base = flat * static_cast<std::size_t>(K);
      for (int k = 0; k < K; ++k) row += p.core.at_flat(base + k) * s(k);
      best = std::max(best, tprod * row);
      return;
    }
    for (int k = start; k < K; ++k) {
      if (count[k] == 0) continue;
      ms[j] = k;
      self(self, j + 1, k, tprod * tmax(k), flat * static_cast<std::size_t>(K) + k);
    }
  };
  rec(rec, 0, 0, 1.0, 0);
  return best;
}

double tilde_lambda_min(const HdcbmParams& p, const Eigen::VectorXd& v) {
  p.validate();
  if (v.size() != p.K) throw DimensionError("contraction vector must have K entries");
  const double vn = v.norm();
  if (!(vn > 0)) throw DimensionError("contraction vector must be nonzero");
  const Eigen::VectorXd d = community_d(p);
  Eigen::MatrixXd B = pair_contraction(p.core, d, d.cwiseProduct(v));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (B + B.transpose()),
                                                    Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() / std::pow(vn, p.m - 2);
}

Eigen::VectorXd theta_powerlaw(int n, double alpha, std::uint64_t seed, double lo, double hi) {
  if (n < 1) throw DimensionError("need n >= 1");
  if (!(lo > 0) || !(hi > lo)) throw InvalidModelError("powerlaw support must satisfy 0 < lo < hi");
  Eigen::VectorXd t(n);
  for (int i = 0; i < n; ++i) {
    const double u = rng::uniform(seed, static_cast<std::uint64_t>(i));
    if (std::abs(alpha - 1.0) < 1e-12) {
      t(i) = lo * std::pow(hi / lo, u);
    } else {
      const double e = 1.0 - alpha;
      t(i) = std::pow(std::pow(lo, e) + u * (std::pow(hi, e) - std::pow(lo, e)), 1.0 / e);
    }
  }
  return t;
}

Eigen::VectorXd theta_reciprocal_uniform(int n, std::uint64_t seed) {
  if (n < 1) throw DimensionError("need n >= 1");
  Eigen::VectorXd t(n);
  for (int i = 0; i < n; ++i) {
    const double u = rng::uniform(seed, static_cast<std::uint64_t>(i));
    t(i) = 1.0 / ((7.0 * u + 1.0) * std::sqrt(5.0));
  }
  return t;
}

HdcbmParams identifiability_rescaled(const HdcbmParams& p) {
  p.validate();
  Eigen::VectorXd scale(p.K);
  for (int k = 0; k < p.K; ++k) {
    const double dk = p.core.diagonal_entry(k);
    if (!(dk > 0))
      throw InvalidModelError("community " + std::to_string(k + 1) +
                              " has zero core diagonal, cannot rescale");
    scale(k) = std::pow(dk, 1.0 / p.m);
  }
  std::vector<double> vals = p.core.values();
  std::vector<int> idx(p.m, 0);
  std::size_t flat = 0;
  do {
    double div = 1.0;
    for (int j = 0; j < p.m; ++j) div *= scale(idx[j]);
    vals[flat++] /= div;
  } while (advance(idx, p.K));

  HdcbmParams out{p.n, p.m, p.K, p.labels, p.theta, CoreTensor(p.K, p.m, std::move(vals))};
  for (int i = 0; i < p.n; ++i) out.theta(i) *= scale(p.labels[i]);
  return out;
}

}  // namespace hyperclust
