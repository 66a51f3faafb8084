#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <istream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sgm/common.hpp"

namespace sgm {

/// Small connected undirected pattern graph (2..8 vertices) stored as
/// adjacency bitmasks.
class QueryGraph {
 public:
  QueryGraph() = default;

  /// Throws ParseError unless the result is a simple connected graph with
  /// 2..kMaxQueryVertices vertices.
  QueryGraph(int n, const std::vector<std::pair<int, int>>& edges) : n_(n) {
    if (n < 2 || n > kMaxQueryVertices)
      throw ParseError("query must have 2.." + std::to_string(kMaxQueryVertices) + " vertices, got " +
                           std::to_string(n),
                       0);
    for (auto [a, b] : edges) {
      if (a < 0 || b < 0 || a >= n || b >= n) throw ParseError("query edge endpoint out of range", 0);
      if (a == b) throw ParseError("query self-loop on vertex " + std::to_string(a), 0);
      adj_[a] |= 1u << b;
      adj_[b] |= 1u << a;
    }
    if (!connected()) throw ParseError("query graph is disconnected", 0);
  }

  int size() const { return n_; }
  bool adjacent(int a, int b) const { return (adj_[a] >> b) & 1u; }
  std::uint32_t mask(int v) const { return adj_[v]; }
  int degree(int v) const { return std::popcount(adj_[v]); }

  int edge_count() const {
    int total = 0;
    for (int v = 0; v < n_; ++v) total += degree(v);
    return total / 2;
  }

  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> out;
    for (int a = 0; a < n_; ++a)
      for (int b = a + 1; b < n_; ++b)
        if (adjacent(a, b)) out.emplace_back(a, b);
    return out;
  }

  /// Row-major n*n adjacency bitstring.
  std::string bitstring() const {
    std::string s;
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b) s += adjacent(a, b) ? '1' : '0';
    return s;
  }

  friend bool operator==(const QueryGraph& a, const QueryGraph& b) {
    return a.n_ == b.n_ && a.adj_ == b.adj_;
  }

 private:
  bool connected() const {
    std::uint32_t seen = 1, frontier = 1;
    while (frontier) {
      std::uint32_t next = 0;
      for (int v = 0; v < n_; ++v)
        if ((frontier >> v) & 1u) next |= adj_[v];
      frontier = next & ~seen;
      seen |= next;
    }
    return seen == (1u << n_) - 1;
  }

  int n_ = 0;
  std::array<std::uint32_t, kMaxQueryVertices> adj_{};
};

inline QueryGraph clique_query(int n) {
  std::vector<std::pair<int, int>> e;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) e.emplace_back(a, b);
  return QueryGraph(n, e);
}

inline QueryGraph path_query(int n) {
  std::vector<std::pair<int, int>> e;
  for (int a = 0; a + 1 < n; ++a) e.emplace_back(a, a + 1);
  return QueryGraph(n, e);
}

/// Accepts either "n" followed by "i j" edge lines, or a single row-major
/// adjacency bitstring of length n*n. '#' starts a comment line.
inline QueryGraph parse_query(std::istream& in) {
  std::vector<std::pair<std::size_t, std::string>> lines;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    auto last = line.find_last_not_of(" \t\r");
    lines.emplace_back(line_no, line.substr(first, last - first + 1));
  }
  if (lines.empty()) throw ParseError("empty query", 0);

  const std::string& head = lines.front().second;
  const bool bits_only = head.find_first_not_of("01") == std::string::npos;
  if (lines.size() == 1 && bits_only && head.size() >= 4) {
    int n = 0;
    while (static_cast<std::size_t>(n * n) < head.size()) ++n;
    if (static_cast<std::size_t>(n * n) != head.size())
      throw ParseError("bitstring length is not a perfect square", lines.front().first);
    std::vector<std::pair<int, int>> edges;
    for (int a = 0; a < n; ++a) {
      if (head[a * n + a] == '1') throw ParseError("query self-loop on vertex " + std::to_string(a), lines.front().first);
      for (int b = 0; b < n; ++b) {
        if (head[a * n + b] != head[b * n + a])
          throw ParseError("adjacency bitstring is not symmetric", lines.front().first);
        if (a < b && head[a * n + b] == '1') edges.emplace_back(a, b);
      }
    }
    try {
      return QueryGraph(n, edges);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), lines.front().first);
    }
  }

  auto read_ints = [](const std::pair<std::size_t, std::string>& l, int count) {
    std::istringstream ss(l.second);
    std::vector<long long> v(count);
    for (auto& x : v)
      if (!(ss >> x)) throw ParseError("expected " + std::to_string(count) + " integer(s)", l.first);
    std::string extra;
    if (ss >> extra) throw ParseError("unexpected token '" + extra + "'", l.first);
    return v;
  };
  const long long n = read_ints(lines.front(), 1)[0];
  if (n < 2 || n > kMaxQueryVertices)
    throw ParseError("query must have 2.." + std::to_string(kMaxQueryVertices) + " vertices", lines.front().first);
  std::vector<std::pair<int, int>> edges;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto v = read_ints(lines[i], 2);
    if (v[0] < 0 || v[1] < 0 || v[0] >= n || v[1] >= n)
      throw ParseError("vertex id out of range [0," + std::to_string(n) + ")", lines[i].first);
    if (v[0] == v[1]) throw ParseError("query self-loop on vertex " + std::to_string(v[0]), lines[i].first);
    edges.emplace_back(static_cast<int>(v[0]), static_cast<int>(v[1]));
  }
  return QueryGraph(static_cast<int>(n), edges);
}

inline QueryGraph parse_query(const std::string& text) {
  std::istringstream in(text);
  return parse_query(in);
}

}  // namespace sgm
