#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hyperclust {

// m-uniform hypergraph on nodes {0,...,n-1}. Edges are node sets of size m,
// stored as sorted tuples in lexicographic order without duplicates. The
// implicit adjacency tensor is supersymmetric with a zero diagonal.
class Hypergraph {
 public:
  Hypergraph(int n, int m, const std::vector<std::vector<std::uint32_t>>& edges);

  int node_count() const { return n_; }
  int order() const { return m_; }
  std::size_t edge_count() const { return flat_.size() / static_cast<std::size_t>(m_); }
  std::span<const std::uint32_t> edge(std::size_t i) const {
    return {flat_.data() + i * static_cast<std::size_t>(m_), static_cast<std::size_t>(m_)};
  }
  const std::vector<std::uint32_t>& flat_edges() const { return flat_; }

 private:
  int n_;
  int m_;
  std::vector<std::uint32_t> flat_;  // edge i occupies [i*m, (i+1)*m), each sorted
};

// Hyperedge set as read from disk, possibly with mixed edge orders.
struct EdgeList {
  int n = 0;
  std::vector<std::vector<std::uint32_t>> edges;  // each sorted, set deduplicated

  bool uniform() const;
  int min_order() const;
  int max_order() const;
};

struct LoadResult {
  EdgeList list;
  // Set when all edges share one order (or expected_m was supplied).
  std::optional<Hypergraph> graph;
  bool uniform() const { return graph.has_value(); }
};

// Plain-text hyperedge list: one edge per line as whitespace-separated node
// ids, '#' starts a comment, and an optional '%n <count>' header line fixes
// the node count (otherwise max id + 1 is used). When expected_m is given,
// every edge must have exactly that many distinct nodes.
LoadResult load_hypergraph(const std::string& path, std::optional<int> expected_m = {});
LoadResult read_hypergraph(std::istream& in, std::optional<int> expected_m = {});

void write_edge_file(const std::string& path, const Hypergraph& h);
void write_label_file(const std::string& path, const std::vector<int>& labels);
std::vector<int> load_label_file(const std::string& path);

}  // namespace hyperclust
