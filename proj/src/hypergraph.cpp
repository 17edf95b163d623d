#include "hyperclust/hypergraph.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "hyperclust/errors.hpp"

namespace hyperclust {

namespace {

std::vector<std::uint32_t> normalize_edge(std::vector<std::uint32_t> e, int n, long line) {
  if (e.size() < 2)
    throw InvalidHyperedgeError("hyperedge needs at least 2 nodes", line);
  std::sort(e.begin(), e.end());
  for (std::size_t i = 0; i + 1 < e.size(); ++i)
    if (e[i] == e[i + 1])
      throw InvalidHyperedgeError("repeated node " + std::to_string(e[i]) + " in hyperedge", line);
  if (n >= 0 && e.back() >= static_cast<std::uint32_t>(n))
    throw InvalidHyperedgeError("node id " + std::to_string(e.back()) +
                                    " outside [0," + std::to_string(n) + ")",
                                line);
  return e;
}

void sort_dedup(std::vector<std::vector<std::uint32_t>>& edges) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

}  // namespace

Hypergraph::Hypergraph(int n, int m, const std::vector<std::vector<std::uint32_t>>& edges)
    : n_(n), m_(m) {
  if (n < 1) throw DimensionError("hypergraph needs at least one node");
  if (m < 2) throw DimensionError("hypergraph order must be at least 2");
  if (m > n) throw DimensionError("hypergraph order exceeds node count");
  std::vector<std::vector<std::uint32_t>> work;
  work.reserve(edges.size());
  for (const auto& e : edges) {
    if (static_cast<int>(e.size()) != m)
      throw InvalidHyperedgeError("edge has " + std::to_string(e.size()) + " nodes, expected " +
                                  std::to_string(m));
    work.push_back(normalize_edge(e, n, -1));
  }
  sort_dedup(work);
  flat_.reserve(work.size() * static_cast<std::size_t>(m));
  for (const auto& e : work) flat_.insert(flat_.end(), e.begin(), e.end());
}

bool EdgeList::uniform() const {
  for (const auto& e : edges)
    if (e.size() != edges.front().size()) return false;
  return true;
}

int EdgeList::min_order() const {
  std::size_t m = edges.empty() ? 0 : edges.front().size();
  for (const auto& e : edges) m = std::min(m, e.size());
  return static_cast<int>(m);
}

int EdgeList::max_order() const {
  std::size_t m = 0;
  for (const auto& e : edges) m = std::max(m, e.size());
  return static_cast<int>(m);
}

LoadResult read_hypergraph(std::istream& in, std::optional<int> expected_m) {
  if (expected_m && *expected_m < 2) throw DimensionError("expected_m must be at least 2");
  EdgeList list;
  std::string line;
  long line_no = 0;
  long header_n = -1;
  bool saw_edge = false;
  std::uint32_t max_id = 0;
  bool any_id = false;

  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;  // blank or comment-only line

    if (tok == "%n") {
      if (saw_edge || header_n >= 0)
        throw ParseError("'%n' header must appear once, before any edge", line_no);
      long long v = 0;
      if (!(ls >> v) || v < 1) throw ParseError("'%n' needs a positive node count", line_no);
      std::string extra;
      if (ls >> extra) throw ParseError("trailing tokens after '%n' header", line_no);
      header_n = v;
      continue;
    }

    std::vector<std::uint32_t> e;
    do {
      long long v = 0;
      try {
        std::size_t pos = 0;
        v = std::stoll(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw ParseError("bad token '" + tok + "'", line_no);
      }
      if (v < 0) throw ParseError("negative node id " + std::to_string(v), line_no);
      e.push_back(static_cast<std::uint32_t>(v));
    } while (ls >> tok);

    if (expected_m && static_cast<int>(e.size()) != *expected_m)
      throw InvalidHyperedgeError("edge has " + std::to_string(e.size()) + " nodes, expected " +
                                      std::to_string(*expected_m),
                                  line_no);
    e = normalize_edge(std::move(e), -1, line_no);
    max_id = any_id ? std::max(max_id, e.back()) : e.back();
    any_id = true;
    saw_edge = true;
    list.edges.push_back(std::move(e));
  }

  int inferred = any_id ? static_cast<int>(max_id) + 1 : 0;
  if (header_n >= 0) {
    if (header_n < inferred)
      throw ParseError("'%n' header " + std::to_string(header_n) + " below max node id + 1 = " +
                       std::to_string(inferred));
    list.n = static_cast<int>(header_n);
  } else {
    list.n = inferred;
  }

  sort_dedup(list.edges);

  LoadResult out;
  out.list = list;
  if (expected_m) {
    out.graph.emplace(std::max(list.n, *expected_m), *expected_m, list.edges);
  } else if (!list.edges.empty() && list.uniform()) {
    out.graph.emplace(list.n, static_cast<int>(list.edges.front().size()), list.edges);
  }
  return out;
}

LoadResult load_hypergraph(const std::string& path, std::optional<int> expected_m) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return read_hypergraph(in, expected_m);
}

void write_edge_file(const std::string& path, const Hypergraph& h) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << "%n " << h.node_count() << "\n";
  for (std::size_t i = 0; i < h.edge_count(); ++i) {
    auto e = h.edge(i);
    for (std::size_t j = 0; j < e.size(); ++j) out << (j ? " " : "") << e[j];
    out << "\n";
  }
  if (!out) throw Error("write failed for '" + path + "'");
}

void write_label_file(const std::string& path, const std::vector<int>& labels) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  for (int v : labels) out << v << "\n";
  if (!out) throw Error("write failed for '" + path + "'");
}

std::vector<int> load_label_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::vector<int> labels;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    long long v;
    if (!(ls >> v)) continue;
    if (v < 0) throw ParseError("negative label", line_no);
    labels.push_back(static_cast<int>(v));
  }
  return labels;
}

}  // namespace hyperclust
