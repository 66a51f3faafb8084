#pragma once

// Edge-list text and binary CSR snapshot formats. Both are documented in
// docs/formats.md.

#include <array>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "sgm/csr_graph.hpp"

namespace sgm {

/// Reads whitespace-separated id pairs, one per line. Blank lines and lines
/// starting with '#' or '%' are skipped. Order, duplicates and self-loops are
/// preserved.
inline std::vector<Edge> parse_edge_list(std::istream& in) {
  std::vector<Edge> edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view rest(line);
    auto skip_ws = [&] {
      while (!rest.empty() && (rest.front() == ' ' || rest.front() == '\t' || rest.front() == '\r'))
        rest.remove_prefix(1);
    };
    skip_ws();
    if (rest.empty() || rest.front() == '#' || rest.front() == '%') continue;
    std::uint64_t ids[2];
    for (auto& id : ids) {
      skip_ws();
      auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), id);
      const bool ends_token = ptr == rest.data() + rest.size() || *ptr == ' ' || *ptr == '\t' || *ptr == '\r';
      if (ec != std::errc() || !ends_token) throw ParseError("expected two non-negative integer ids", line_no);
      rest.remove_prefix(static_cast<std::size_t>(ptr - rest.data()));
    }
    skip_ws();
    if (!rest.empty()) throw ParseError("trailing data after edge", line_no);
    edges.emplace_back(ids[0], ids[1]);
  }
  return edges;
}

inline std::vector<Edge> parse_edge_list(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_edge_list(in);
}

inline void write_edge_list(std::ostream& out, const std::vector<Edge>& edges) {
  for (auto [a, b] : edges) out << a << ' ' << b << '\n';
}

inline constexpr std::array<char, 4> kSnapshotMagic{'C', 'S', 'R', 'G'};
inline constexpr std::uint32_t kSnapshotVersion = 1;

namespace detail {

template <class T>
void put_le(std::ostream& out, T value) {
  unsigned char bytes[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<unsigned char>(value >> (8 * i));
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T get_le(std::istream& in) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) throw ParseError("snapshot truncated", 0);
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(bytes[i]) << (8 * i);
  return value;
}

}  // namespace detail

/// magic "CSRG" | version u32 | vertex_count u64 | edge_count u64 |
/// offsets u64[vertex_count+1] | neighbors u32[2*edge_count], little endian.
inline void write_snapshot(std::ostream& out, const CsrGraph& g) {
  out.write(kSnapshotMagic.data(), kSnapshotMagic.size());
  detail::put_le<std::uint32_t>(out, kSnapshotVersion);
  detail::put_le<std::uint64_t>(out, g.vertex_count());
  detail::put_le<std::uint64_t>(out, g.edge_count());
  for (EdgeIndex o : g.offsets()) detail::put_le<std::uint64_t>(out, o);
  for (VertexId v : g.neighbor_array()) detail::put_le<std::uint32_t>(out, v);
}

inline CsrGraph read_snapshot(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kSnapshotMagic)
    throw ParseError("not a CSRG snapshot", 0);
  const auto version = detail::get_le<std::uint32_t>(in);
  if (version != kSnapshotVersion) throw ParseError("unsupported snapshot version " + std::to_string(version), 0);
  const auto n = detail::get_le<std::uint64_t>(in);
  const auto m = detail::get_le<std::uint64_t>(in);
  if (n >= kNoBound) throw ParseError("snapshot vertex count too large", 0);
  std::vector<EdgeIndex> offsets(n + 1);
  for (auto& o : offsets) o = detail::get_le<std::uint64_t>(in);
  if (offsets.back() != 2 * m) throw ParseError("snapshot edge count disagrees with offsets", 0);
  std::vector<VertexId> neighbors(2 * m);
  for (auto& v : neighbors) v = detail::get_le<std::uint32_t>(in);
  try {
    return CsrGraph(std::move(offsets), std::move(neighbors));
  } catch (const Error& e) {
    throw ParseError(std::string("invalid snapshot: ") + e.what(), 0);
  }
}

/// Loads either format, detected by the snapshot magic.
inline CsrGraph load_graph(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open graph file '" + path + "'");
  std::array<char, 4> head{};
  in.read(head.data(), head.size());
  const bool is_snapshot = in.gcount() == 4 && head == kSnapshotMagic;
  in.clear();
  in.seekg(0);
  if (is_snapshot) return read_snapshot(in);
  return build_csr(parse_edge_list(in));
}

}  // namespace sgm
