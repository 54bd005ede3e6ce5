#pragma once

// Parametric DBMs paired with a constraint set (CPDBMs) and the symbolic zone
// operations on them. Every operation that compares bounds may split the
// constraint set; results are returned as a list of branches whose
// extensions are pairwise disjoint.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ptasynth/dbm.hpp"
#include "ptasynth/params.hpp"

namespace ptasynth {

/// x_i - x_j (<, <=) e.
struct AtomicGuard {
  std::size_t i = 0;
  std::size_t j = 0;
  StrictBound bound;

  bool operator==(const AtomicGuard& other) const = default;
};

using Guard = std::vector<AtomicGuard>;

class Pdbm {
 public:
  Pdbm() = default;
  /// Every entry (0, <=).
  explicit Pdbm(std::size_t dim);

  std::size_t dim() const { return dim_; }
  const StrictBound& at(std::size_t i, std::size_t j) const { return m_[i * dim_ + j]; }
  StrictBound& at(std::size_t i, std::size_t j) { return m_[i * dim_ + j]; }

  Dbm evaluate(std::span<const std::int64_t> v) const;

  bool operator==(const Pdbm& other) const = default;
  std::size_t hash() const;

 private:
  std::size_t dim_ = 0;
  std::vector<StrictBound> m_;
};

struct Cpdbm {
  ConstraintSet c;
  Pdbm d;
  bool canonical = false;
};

/// Number of constraint-set splits performed per operation.
struct SplitCounters {
  std::uint64_t guard = 0;
  std::uint64_t canonicalize = 0;
  std::uint64_t emptiness = 0;
  std::uint64_t extrapolate = 0;
  std::uint64_t merged = 0;
};

std::vector<Cpdbm> apply_atomic_guard(const Cpdbm& z, const AtomicGuard& g,
                                      SplitCounters* counters = nullptr);
std::vector<Cpdbm> apply_guard(const Cpdbm& z, const Guard& g, SplitCounters* counters = nullptr);

/// Parametric Floyd-Warshall. Branches that are empty for their whole
/// extension are dropped; the survivors are canonical and nonempty for every
/// valuation they contain.
std::vector<Cpdbm> canonicalize(const Cpdbm& z, SplitCounters* counters = nullptr);

/// Canonicalizes every input and concatenates the results.
std::vector<Cpdbm> canonicalize_all(const std::vector<Cpdbm>& zs,
                                    SplitCounters* counters = nullptr);

Cpdbm reset(const Cpdbm& z, const std::vector<std::size_t>& clocks);
Cpdbm up(const Cpdbm& z);

/// pk-extrapolation with clock maxima `max` (max[0] = 0). Results are not
/// re-closed.
std::vector<Cpdbm> extrapolate_pk(const Cpdbm& z, const std::vector<std::int64_t>& max,
                                  SplitCounters* counters = nullptr);

/// [[D]]_v without closure. Throws DomainError when v is not in [[C]].
Dbm evaluate(const Cpdbm& z, std::span<const std::int64_t> v);

/// (bounds of the box, zero matrix with upper bounds removed).
Cpdbm initial_cpdbm(std::size_t dim, const BoxPtr& box);

/// One line per finite off-diagonal entry, then "where:" and the constraints.
std::string dump(const Cpdbm& z, const std::vector<std::string>& clocks);

}  // namespace ptasynth
