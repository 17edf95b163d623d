#include "hyperclust/contractions.hpp"

#include <algorithm>
#include <numeric>

#include "hyperclust/errors.hpp"

namespace hyperclust {

std::int64_t factorial(int k) {
  std::int64_t f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

std::vector<std::int64_t> degrees(const Hypergraph& h) {
  std::vector<std::int64_t> deg(h.node_count(), 0);
  for (std::uint32_t v : h.flat_edges()) ++deg[v];
  const std::int64_t scale = factorial(h.order() - 1);
  for (auto& d : deg) d *= scale;
  return deg;
}

Eigen::MatrixXd contract_all_but_one(const Hypergraph& h, const Eigen::MatrixXd& X) {
  const int n = h.node_count();
  const int m = h.order();
  if (X.rows() != n) throw DimensionError("factor rows must match node count");
  const int K = static_cast<int>(X.cols());
  if (K < 1) throw DimensionError("factor needs at least one column");

  std::size_t cols = 1;
  for (int j = 1; j < m; ++j) {
    cols *= static_cast<std::size_t>(K);
    if (cols > (std::size_t{1} << 24)) throw DimensionError("K^(m-1) too large to materialize");
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(cols));

  std::vector<int> perm(m);
  std::vector<double> cur(cols), next(cols);
  for (std::size_t e = 0; e < h.edge_count(); ++e) {
    auto edge = h.edge(e);
    for (int j = 0; j < m; ++j) perm[j] = static_cast<int>(edge[j]);
    // Edge nodes arrive sorted, so the permutation cycle covers every
    // ordered arrangement exactly once: each head with each tail order.
    do {
      std::size_t len = 1;
      cur[0] = 1.0;
      for (int j = 1; j < m; ++j) {
        const int node = perm[j];
        for (int k = 0; k < K; ++k) {
          const double x = X(node, k);
          double* dst = next.data() + static_cast<std::size_t>(k) * len;
          for (std::size_t t = 0; t < len; ++t) dst[t] = cur[t] * x;
        }
        len *= static_cast<std::size_t>(K);
        std::swap(cur, next);
      }
      double* row = out.data() + perm[0];  // column-major stride n
      for (std::size_t c = 0; c < cols; ++c) row[c * static_cast<std::size_t>(n)] += cur[c];
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return out;
}

Eigen::MatrixXd contract_to_matrix(const Hypergraph& h, const Eigen::VectorXd& v) {
  const int n = h.node_count();
  const int m = h.order();
  if (v.size() != n) throw DimensionError("vector length must match node count");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  const double tail_orders = static_cast<double>(factorial(m - 2));
  std::vector<double> vals(m);
  for (std::size_t e = 0; e < h.edge_count(); ++e) {
    auto edge = h.edge(e);
    for (int j = 0; j < m; ++j) vals[j] = v(edge[j]);
    for (int p = 0; p < m; ++p) {
      for (int q = p + 1; q < m; ++q) {
        double prod = tail_orders;
        for (int j = 0; j < m; ++j)
          if (j != p && j != q) prod *= vals[j];
        out(edge[p], edge[q]) += prod;
        out(edge[q], edge[p]) += prod;
      }
    }
  }
  return out;
}

Eigen::MatrixXd contract_modes3_up(const Hypergraph& h, const Eigen::MatrixXd& X) {
  const int n = h.node_count();
  const int m = h.order();
  if (m < 3) throw DimensionError("contraction over modes 3.. needs order >= 3");
  if (X.rows() != n) throw DimensionError("factor rows must match node count");
  const int K = static_cast<int>(X.cols());

  std::size_t kcols = 1;
  for (int j = 2; j < m; ++j) kcols *= static_cast<std::size_t>(K);
  const std::size_t cols = kcols * static_cast<std::size_t>(n);
  if (cols > (std::size_t{1} << 26)) throw DimensionError("n*K^(m-2) too large to materialize");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(cols));

  std::vector<int> rest(m - 2);
  std::vector<double> cur(kcols), next(kcols);
  for (std::size_t e = 0; e < h.edge_count(); ++e) {
    auto edge = h.edge(e);
    for (int p = 0; p < m; ++p) {
      for (int q = 0; q < m; ++q) {
        if (q == p) continue;
        int r = 0;
        for (int j = 0; j < m; ++j)
          if (j != p && j != q) rest[r++] = static_cast<int>(edge[j]);
        std::sort(rest.begin(), rest.end());
        do {
          std::size_t len = 1;
          cur[0] = 1.0;
          for (int j = 0; j < m - 2; ++j) {
            const int node = rest[j];
            for (int k = 0; k < K; ++k) {
              const double x = X(node, k);
              double* dst = next.data() + static_cast<std::size_t>(k) * len;
              for (std::size_t t = 0; t < len; ++t) dst[t] = cur[t] * x;
            }
            len *= static_cast<std::size_t>(K);
            std::swap(cur, next);
          }
          const std::size_t base = static_cast<std::size_t>(edge[q]);
          double* head = out.data() + edge[p];
          for (std::size_t c = 0; c < kcols; ++c) {
            std::size_t col = base + static_cast<std::size_t>(n) * c;
            head[col * static_cast<std::size_t>(n)] += cur[c];
          }
        } while (std::next_permutation(rest.begin(), rest.end()));
      }
    }
  }
  return out;
}

WeightedGraph project_graph(const Hypergraph& h, bool weighted) {
  const int n = h.node_count();
  const int m = h.order();
  WeightedGraph g;
  g.n = n;
  g.adjacency = Eigen::MatrixXd::Zero(n, n);
  const double w = static_cast<double>(factorial(m - 2));
  for (std::size_t e = 0; e < h.edge_count(); ++e) {
    auto edge = h.edge(e);
    for (int p = 0; p < m; ++p) {
      for (int q = p + 1; q < m; ++q) {
        if (weighted) {
          g.adjacency(edge[p], edge[q]) += w;
          g.adjacency(edge[q], edge[p]) += w;
        } else {
          g.adjacency(edge[p], edge[q]) = 1.0;
          g.adjacency(edge[q], edge[p]) = 1.0;
        }
      }
    }
  }
  return g;
}

Eigen::MatrixXd cooccurrence_gram(const Hypergraph& h, bool remove_diagonal) {
  const int n = h.node_count();
  const int m = h.order();
  const std::size_t ne = h.edge_count();
  const double scale = static_cast<double>(factorial(m - 1));

  // One (tail, head) pair per edge slot, where the tail is the edge minus the
  // head. Heads sharing a tail contribute to each other's gram entries.
  const std::size_t slots = ne * static_cast<std::size_t>(m);
  std::vector<std::uint32_t> tails(slots * static_cast<std::size_t>(m - 1));
  std::vector<std::uint32_t> heads(slots);
  std::size_t s = 0;
  for (std::size_t e = 0; e < ne; ++e) {
    auto edge = h.edge(e);
    for (int hpos = 0; hpos < m; ++hpos) {
      std::uint32_t* t = tails.data() + s * static_cast<std::size_t>(m - 1);
      int r = 0;
      for (int j = 0; j < m; ++j)
        if (j != hpos) t[r++] = edge[j];
      heads[s] = edge[hpos];
      ++s;
    }
  }

  std::vector<std::uint32_t> idx(slots);
  std::iota(idx.begin(), idx.end(), 0);
  const std::size_t tw = static_cast<std::size_t>(m - 1);
  std::sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) {
    const std::uint32_t* ta = tails.data() + a * tw;
    const std::uint32_t* tb = tails.data() + b * tw;
    return std::lexicographical_compare(ta, ta + tw, tb, tb + tw);
  });

  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
  std::size_t lo = 0;
  while (lo < slots) {
    std::size_t hi = lo + 1;
    const std::uint32_t* ref = tails.data() + static_cast<std::size_t>(idx[lo]) * tw;
    while (hi < slots &&
           std::equal(ref, ref + tw, tails.data() + static_cast<std::size_t>(idx[hi]) * tw))
      ++hi;
    for (std::size_t a = lo; a < hi; ++a)
      for (std::size_t b = lo; b < hi; ++b) G(heads[idx[a]], heads[idx[b]]) += scale;
    lo = hi;
  }
  if (remove_diagonal) G.diagonal().setZero();
  return G;
}

}  // namespace hyperclust
