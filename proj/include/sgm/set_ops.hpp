#pragma once

// Two-pointer merge kernels over sorted vertex sets.
//
// Every kernel reports how many elements it consumed from each input and how
// many element comparisons it made. A bound b restricts the output to ids < b
// and stops the scan as soon as the bound is reached.

#include <algorithm>
#include <vector>

#include "sgm/common.hpp"

namespace sgm {

using VertexSet = std::vector<VertexId>;

struct ScanCount {
  std::size_t a = 0;
  std::size_t b = 0;
  std::size_t comparisons = 0;

  std::size_t total() const { return a + b; }
  ScanCount& operator+=(const ScanCount& o) {
    a += o.a;
    b += o.b;
    comparisons += o.comparisons;
    return *this;
  }
};

/// Writes a ∩ b (restricted to ids < bound) to out and returns its size.
/// out may alias a.data(); it needs room for min(|a|, |b|) elements. A null
/// out only counts.
inline std::size_t intersect_into(VertexSpan a, VertexSpan b, VertexId* out, VertexId bound,
                                  ScanCount& scan) {
  std::size_t i = 0, j = 0, k = 0, cmp = 0;
  const std::size_t na = a.size(), nb = b.size();
  while (i < na && j < nb) {
    const VertexId x = a[i], y = b[j];
    if (x >= bound || y >= bound) break;
    ++cmp;
    if (x < y) {
      ++i;
    } else if (y < x) {
      ++j;
    } else {
      if (out) out[k] = x;
      ++k;
      ++i;
      ++j;
    }
  }
  scan.a += i;
  scan.b += j;
  scan.comparisons += cmp;
  return k;
}

/// Writes a ∖ b (restricted to ids < bound) to out and returns its size.
/// out may alias a.data(); it needs room for |a| elements.
inline std::size_t subtract_into(VertexSpan a, VertexSpan b, VertexId* out, VertexId bound,
                                 ScanCount& scan) {
  std::size_t i = 0, j = 0, k = 0, cmp = 0;
  const std::size_t na = a.size(), nb = b.size();
  while (i < na) {
    const VertexId x = a[i];
    if (x >= bound) break;
    while (j < nb && b[j] < x) {
      ++cmp;
      ++j;
    }
    if (j < nb) {
      ++cmp;
      if (b[j] == x) {
        ++i;
        ++j;
        continue;
      }
    }
    if (out) out[k] = x;
    ++k;
    ++i;
  }
  scan.a += i;
  scan.b += j;
  scan.comparisons += cmp;
  return k;
}

inline VertexSet intersect(VertexSpan a, VertexSpan b, VertexId bound = kNoBound,
                           ScanCount* scan = nullptr) {
  VertexSet out(std::min(a.size(), b.size()));
  ScanCount local;
  out.resize(intersect_into(a, b, out.data(), bound, scan ? *scan : local));
  return out;
}

inline VertexSet subtract(VertexSpan a, VertexSpan b, VertexId bound = kNoBound,
                          ScanCount* scan = nullptr) {
  VertexSet out(a.size());
  ScanCount local;
  out.resize(subtract_into(a, b, out.data(), bound, scan ? *scan : local));
  return out;
}

/// Prefix of a sorted set holding the ids < bound.
inline VertexSpan truncate_below(VertexSpan s, VertexId bound) {
  if (bound == kNoBound) return s;
  return s.first(static_cast<std::size_t>(std::lower_bound(s.begin(), s.end(), bound) - s.begin()));
}

inline bool is_strictly_sorted(VertexSpan s) {
  return std::adjacent_find(s.begin(), s.end(), [](VertexId x, VertexId y) { return x >= y; }) ==
         s.end();
}

}  // namespace sgm
