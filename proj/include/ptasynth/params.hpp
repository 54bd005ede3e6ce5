#pragma once

// Integer affine expressions over parameters, parameter boxes, constraints
// and exact valuation-set arithmetic.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace ptasynth {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A configured size limit (box points, stored states, DNF width) was hit.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// A function was called outside its documented domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

using ParamIndex = std::uint32_t;

/// A parameter valuation, indexed by the canonical parameter order of a box.
using Valuation = std::vector<std::int64_t>;

/// Integer bounds lb(p) <= p <= ub(p) for an ordered list of parameters.
/// Points of the box are numbered row-major: the first parameter varies
/// slowest.
class ParamBox {
 public:
  static constexpr std::uint64_t kDefaultMaxPoints = std::uint64_t{1} << 24;

  ParamBox() = default;
  ParamBox(std::vector<std::string> names, std::vector<std::int64_t> lower,
           std::vector<std::int64_t> upper,
           std::uint64_t max_points = kDefaultMaxPoints);

  std::size_t size() const { return names_.size(); }
  std::size_t points() const { return points_; }

  const std::string& name(ParamIndex p) const { return names_.at(p); }
  const std::vector<std::string>& names() const { return names_; }
  std::int64_t lower(ParamIndex p) const { return lower_.at(p); }
  std::int64_t upper(ParamIndex p) const { return upper_.at(p); }
  std::optional<ParamIndex> find(std::string_view name) const;

  Valuation point(std::size_t index) const;
  void decode(std::size_t index, std::span<std::int64_t> out) const;
  std::size_t index_of(std::span<const std::int64_t> v) const;
  bool contains(std::span<const std::int64_t> v) const;

  bool operator==(const ParamBox& other) const {
    return names_ == other.names_ && lower_ == other.lower_ &&
           upper_ == other.upper_;
  }

 private:
  std::vector<std::string> names_;
  std::vector<std::int64_t> lower_;
  std::vector<std::int64_t> upper_;
  std::vector<std::size_t> strides_;
  std::size_t points_ = 1;
};

using BoxPtr = std::shared_ptr<const ParamBox>;

/// z0 + z1*p1 + ... + zn*pn with integer coefficients. Terms are kept sorted
/// by parameter index and zero coefficients are never stored, so structural
/// equality coincides with equality of the normal form.
class AffineExpr {
 public:
  AffineExpr() = default;
  explicit AffineExpr(std::int64_t constant) : constant_(constant) {}

  static AffineExpr param(ParamIndex p, std::int64_t coeff = 1);

  std::int64_t constant() const { return constant_; }
  const std::vector<std::pair<ParamIndex, std::int64_t>>& terms() const {
    return terms_;
  }
  bool is_constant() const { return terms_.empty(); }
  std::int64_t coefficient(ParamIndex p) const;

  std::int64_t eval(std::span<const std::int64_t> v) const;

  AffineExpr operator+(const AffineExpr& rhs) const;
  AffineExpr operator-(const AffineExpr& rhs) const;
  AffineExpr operator-() const;
  AffineExpr scaled(std::int64_t factor) const;
  AffineExpr operator+(std::int64_t c) const { return *this + AffineExpr(c); }
  AffineExpr operator-(std::int64_t c) const { return *this - AffineExpr(c); }

  bool operator==(const AffineExpr& other) const = default;
  std::size_t hash() const;

  /// Renders with parameter names, e.g. "2*p - q + 3".
  std::string to_string(const std::vector<std::string>& names) const;

 private:
  std::int64_t constant_ = 0;
  std::vector<std::pair<ParamIndex, std::int64_t>> terms_;
};

/// e[v]. Throws std::invalid_argument when v does not cover a parameter of e.
std::int64_t eval_expr(const AffineExpr& e, std::span<const std::int64_t> v);

/// max_{lb,ub}(e): positive coefficients take ub, negative ones take lb.
std::int64_t max_bound(const AffineExpr& e, const ParamBox& box);
std::int64_t min_bound(const AffineExpr& e, const ParamBox& box);

/// Normal form `lhs < 0` (strict) or `lhs <= 0`.
struct Constraint {
  AffineExpr lhs;
  bool strict = false;

  static Constraint le(const AffineExpr& a, const AffineExpr& b);
  static Constraint lt(const AffineExpr& a, const AffineExpr& b);
  static Constraint ge(const AffineExpr& a, const AffineExpr& b) { return le(b, a); }
  static Constraint gt(const AffineExpr& a, const AffineExpr& b) { return lt(b, a); }
  static Constraint always() { return {AffineExpr(0), false}; }
  static Constraint never() { return {AffineExpr(0), true}; }

  bool holds(std::span<const std::int64_t> v) const;
  Constraint negated() const;

  bool operator==(const Constraint& other) const = default;
  std::size_t hash() const;
  std::string to_string(const std::vector<std::string>& names) const;
};

/// A subset of the integer points of a box, stored as a bitset over the
/// row-major point numbering.
class ValuationSet {
 public:
  ValuationSet() = default;
  explicit ValuationSet(BoxPtr box, bool full = false);

  static ValuationSet empty(BoxPtr box) { return ValuationSet(std::move(box), false); }
  static ValuationSet full(BoxPtr box) { return ValuationSet(std::move(box), true); }

  const ParamBox& box() const { return *box_; }
  const BoxPtr& box_ptr() const { return box_; }

  bool contains(std::size_t index) const {
    return (words_[index >> 6] >> (index & 63)) & 1U;
  }
  bool contains(std::span<const std::int64_t> v) const;
  void insert(std::size_t index) { words_[index >> 6] |= std::uint64_t{1} << (index & 63); }
  void erase(std::size_t index) { words_[index >> 6] &= ~(std::uint64_t{1} << (index & 63)); }

  std::size_t count() const;
  bool is_empty() const;
  std::optional<std::size_t> first() const;

  ValuationSet unite(const ValuationSet& other) const;
  ValuationSet intersect(const ValuationSet& other) const;
  ValuationSet minus(const ValuationSet& other) const;
  ValuationSet complement() const;
  bool is_subset_of(const ValuationSet& other) const;

  ValuationSet& operator|=(const ValuationSet& other);

  /// Calls fn(index) for every member in ascending order.
  template <class Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits != 0) {
        const int bit = __builtin_ctzll(bits);
        fn(w * 64 + static_cast<std::size_t>(bit));
        bits &= bits - 1;
      }
    }
  }

  std::vector<Valuation> valuations() const;

  const std::vector<std::uint64_t>& words() const { return words_; }
  std::size_t hash() const;
  bool operator==(const ValuationSet& other) const;

 private:
  void check_compatible(const ValuationSet& other) const;

  BoxPtr box_;
  std::vector<std::uint64_t> words_;
};

/// Sorted array of {"p": value, ...} objects in row-major order.
nlohmann::ordered_json to_json(const ValuationSet& set);

enum class Coverage { Covers, CoversNegation, Split };

/// An immutable finite set of constraints together with its extension over
/// the box it was built for. Copies share the underlying representation.
class ConstraintSet {
 public:
  ConstraintSet() = default;
  /// The empty constraint set; its extension is the whole box.
  explicit ConstraintSet(BoxPtr box);
  /// Extension computed by enumerating every point of the box.
  ConstraintSet(BoxPtr box, std::vector<Constraint> constraints);

  /// {p >= lb(p), p <= ub(p) | p in P}.
  static ConstraintSet bounds(BoxPtr box);

  const std::vector<Constraint>& constraints() const { return rep_->constraints; }
  const ValuationSet& extension() const { return rep_->extension; }
  const ParamBox& box() const { return *rep_->box; }
  const BoxPtr& box_ptr() const { return rep_->box; }
  bool is_satisfiable() const { return !rep_->extension.is_empty(); }

  Coverage covers(const Constraint& c) const;
  ConstraintSet with(const Constraint& c) const;
  /// (C + {c}, C + {not c}); both sides may be unsatisfiable.
  std::pair<ConstraintSet, ConstraintSet> split(const Constraint& c) const;

 private:
  struct Rep {
    BoxPtr box;
    std::vector<Constraint> constraints;
    ValuationSet extension;
    // Bounding box of the extension, used to decide most coverage queries
    // without touching individual points.
    std::vector<std::int64_t> lo;
    std::vector<std::int64_t> hi;
  };

  ConstraintSet(BoxPtr box, std::vector<Constraint> constraints, ValuationSet ext);
  static std::shared_ptr<const Rep> make_rep(BoxPtr box, std::vector<Constraint> constraints,
                                             ValuationSet ext);

  std::shared_ptr<const Rep> rep_;
};

/// [[C]] over `box`; reuses the cached extension when C was built for it.
ValuationSet extension(const ConstraintSet& c, const BoxPtr& box);

/// C |= c, C |= not c, or neither. Vacuously Covers when [[C]] is empty.
Coverage covers(const ConstraintSet& c_set, const Constraint& c, const BoxPtr& box);

/// A DBM bound (e, <) or (e, <=), or (infinity, <).
struct StrictBound {
  AffineExpr expr;
  bool infinite = false;
  bool strict = false;

  static StrictBound infinity() { return {AffineExpr(), true, true}; }
  static StrictBound le(AffineExpr e) { return {std::move(e), false, false}; }
  static StrictBound lt(AffineExpr e) { return {std::move(e), false, true}; }
  static StrictBound le(std::int64_t c) { return le(AffineExpr(c)); }
  static StrictBound lt(std::int64_t c) { return lt(AffineExpr(c)); }

  bool operator==(const StrictBound& other) const = default;
  std::size_t hash() const;
  std::string to_string(const std::vector<std::string>& names) const;
};

/// Sum of bounds, strict when either operand is.
StrictBound bound_add(const StrictBound& a, const StrictBound& b);

/// The constraint stating that `a` is at most `b` in the DBM bound order,
/// i.e. e_a (a.rel => b.rel) e_b with <= read as true.
Constraint bound_le_constraint(const StrictBound& a, const StrictBound& b);

inline void hash_combine(std::size_t& seed, std::size_t value) {
  seed ^= value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

}  // namespace ptasynth
