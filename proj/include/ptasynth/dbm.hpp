#pragma once

// Concrete difference bound matrices over integer constants.
//
// Bounds use the usual packed encoding: raw = 2*v + 1 for (v, <=) and
// raw = 2*v for (v, <), so the integer order on raw values is the bound
// order. Infinity is INT64_MAX.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace ptasynth {

using raw_t = std::int64_t;

namespace dbm {

constexpr raw_t kInfinity = std::numeric_limits<raw_t>::max();
constexpr raw_t kLeZero = 1;

constexpr raw_t bound(std::int64_t value, bool strict) { return 2 * value + (strict ? 0 : 1); }
constexpr raw_t le(std::int64_t value) { return bound(value, false); }
constexpr raw_t lt(std::int64_t value) { return bound(value, true); }
constexpr std::int64_t value_of(raw_t raw) { return raw >> 1; }
constexpr bool is_strict(raw_t raw) { return (raw & 1) == 0; }

constexpr raw_t add(raw_t a, raw_t b) {
  if (a == kInfinity || b == kInfinity) return kInfinity;
  return a + b - ((a | b) & 1);
}

/// Complement of x_i - x_j ~ v is x_j - x_i ~' -v.
constexpr raw_t negate(raw_t raw) { return 1 - raw; }

std::string to_string(raw_t raw);

}  // namespace dbm

/// An n x n matrix, index 0 is the reference clock.
class Dbm {
 public:
  Dbm() = default;
  /// All entries (0, <=): every clock equals zero.
  explicit Dbm(std::size_t dim);

  static Dbm zero(std::size_t dim) { return Dbm(dim); }
  /// x_i >= 0 for every clock, no upper bounds.
  static Dbm universe(std::size_t dim);

  std::size_t dim() const { return dim_; }
  raw_t at(std::size_t i, std::size_t j) const { return m_[i * dim_ + j]; }
  raw_t& at(std::size_t i, std::size_t j) { return m_[i * dim_ + j]; }

  /// Shortest-path closure. Returns false if the zone is empty.
  bool close();
  /// Assumes a closed matrix.
  bool is_empty() const;

  void up();
  void reset(std::size_t clock);
  /// Intersects with x_i - x_j ~ raw and re-closes. Returns false if empty.
  bool constrain(std::size_t i, std::size_t j, raw_t raw);
  /// k-extrapolation with per-clock maxima; leaves the matrix unclosed.
  void extrapolate(const std::vector<std::int64_t>& max);

  bool satisfies(std::size_t i, std::size_t j, raw_t raw) const;

  const std::vector<raw_t>& raw() const { return m_; }
  bool operator==(const Dbm& other) const = default;
  std::size_t hash() const;

  std::string to_string(const std::vector<std::string>& clocks) const;

 private:
  std::size_t dim_ = 0;
  std::vector<raw_t> m_;
};

}  // namespace ptasynth
