#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>

namespace sgm {

using VertexId = std::uint32_t;
using EdgeIndex = std::uint64_t;
using VertexSpan = std::span<const VertexId>;

inline constexpr VertexId kNoBound = std::numeric_limits<VertexId>::max();

// Largest query the scheduler accepts; orderings and automorphisms are enumerated.
inline constexpr int kMaxQueryVertices = 8;

enum class Variant : std::uint8_t { kEdgeInduced, kVertexInduced };
enum class Strategy : std::uint8_t { kNone, kEager, kOnline };

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed user input (edge lists, query files, snapshots).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Planner invariant violated; always a bug, never user error.
class PlanError : public Error {
 public:
  using Error::Error;
};

class EngineError : public Error {
 public:
  using Error::Error;
};

inline const char* to_string(Variant v) { return v == Variant::kEdgeInduced ? "edge" : "vertex"; }

inline const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::kNone: return "none";
    case Strategy::kEager: return "eager";
    case Strategy::kOnline: return "online";
  }
  return "?";
}

inline Variant parse_variant(const std::string& s) {
  if (s == "edge") return Variant::kEdgeInduced;
  if (s == "vertex") return Variant::kVertexInduced;
  throw ParseError("unknown variant '" + s + "' (expected edge|vertex)", 0);
}

inline Strategy parse_strategy(const std::string& s) {
  if (s == "none") return Strategy::kNone;
  if (s == "eager") return Strategy::kEager;
  if (s == "online") return Strategy::kOnline;
  throw ParseError("unknown strategy '" + s + "' (expected none|eager|online)", 0);
}

}  // namespace sgm
