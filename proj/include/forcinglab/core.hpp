#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace flab {

using SeqId = std::uint32_t;
using FilterId = std::uint32_t;
using SystemId = std::uint32_t;

/// Desk-scale surrogate for an ordinal. Only the order is meaningful.
struct Ordinal {
  std::uint32_t value = 0;

  constexpr Ordinal() = default;
  constexpr explicit Ordinal(std::uint32_t v) : value(v) {}
  friend constexpr auto operator<=>(Ordinal, Ordinal) = default;
};

/// An optional extender sequence: the empty tag of a block or support coordinate.
using Tag = std::optional<SeqId>;

/// Sorted, duplicate-free set of sequence ids.
using SeqSet = std::vector<SeqId>;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
/// An argument lies outside the domain of an operation.
struct DomainError : Error {
  using Error::Error;
};
/// The instance itself is malformed (missing projection entries etc).
struct ConfigError : Error {
  using Error::Error;
};
struct GenerationError : Error {
  using Error::Error;
};
/// A documented precondition of an operation does not hold.
struct PreconditionError : Error {
  using Error::Error;
};
/// A search or enumeration exceeded its configured cap.
struct CapExceeded : Error {
  using Error::Error;
};

namespace sets {

inline SeqSet normalize(SeqSet s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

inline bool contains(const SeqSet& s, SeqId x) {
  return std::binary_search(s.begin(), s.end(), x);
}

/// a ⊆ b
inline bool subset(const SeqSet& a, const SeqSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

inline SeqSet intersect(const SeqSet& a, const SeqSet& b) {
  SeqSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline SeqSet unite(const SeqSet& a, const SeqSet& b) {
  SeqSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline SeqSet minus(const SeqSet& a, const SeqSet& b) {
  SeqSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace sets

/// Outcome of a bounded search. Unknown is never a refutation.
enum class Verdict { Yes, No, Unknown };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Yes:
      return "yes";
    case Verdict::No:
      return "no";
    case Verdict::Unknown:
      return "unknown";
  }
  return "?";
}

}  // namespace flab
