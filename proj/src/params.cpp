#include "ptasynth/params.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace ptasynth {

// ---------------------------------------------------------------------------
// ParamBox

ParamBox::ParamBox(std::vector<std::string> names, std::vector<std::int64_t> lower,
                   std::vector<std::int64_t> upper, std::uint64_t max_points)
    : names_(std::move(names)), lower_(std::move(lower)), upper_(std::move(upper)) {
  if (names_.size() != lower_.size() || names_.size() != upper_.size()) {
    throw std::invalid_argument("parameter box: names and bounds differ in length");
  }
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (lower_[i] > upper_[i]) {
      throw std::invalid_argument("parameter box: empty range for '" + names_[i] + "'");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (names_[i] == names_[j]) {
        throw std::invalid_argument("parameter box: duplicate parameter '" + names_[i] + "'");
      }
    }
  }
  strides_.assign(names_.size(), 1);
  std::uint64_t total = 1;
  for (std::size_t k = names_.size(); k-- > 0;) {
    strides_[k] = static_cast<std::size_t>(total);
    const auto width = static_cast<std::uint64_t>(upper_[k] - lower_[k]) + 1;
    if (width > max_points || total > max_points / width) {
      throw CapacityError("parameter box exceeds " + std::to_string(max_points) + " points");
    }
    total *= width;
  }
  points_ = static_cast<std::size_t>(total);
}

std::optional<ParamIndex> ParamBox::find(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return static_cast<ParamIndex>(i);
  }
  return std::nullopt;
}

void ParamBox::decode(std::size_t index, std::span<std::int64_t> out) const {
  for (std::size_t k = 0; k < names_.size(); ++k) {
    out[k] = lower_[k] + static_cast<std::int64_t>(index / strides_[k]);
    index %= strides_[k];
  }
}

Valuation ParamBox::point(std::size_t index) const {
  if (index >= points_) throw std::out_of_range("parameter box: point index out of range");
  Valuation v(names_.size());
  decode(index, v);
  return v;
}

std::size_t ParamBox::index_of(std::span<const std::int64_t> v) const {
  if (!contains(v)) throw DomainError("valuation outside the parameter box");
  std::size_t index = 0;
  for (std::size_t k = 0; k < names_.size(); ++k) {
    index += static_cast<std::size_t>(v[k] - lower_[k]) * strides_[k];
  }
  return index;
}

bool ParamBox::contains(std::span<const std::int64_t> v) const {
  if (v.size() != names_.size()) return false;
  for (std::size_t k = 0; k < names_.size(); ++k) {
    if (v[k] < lower_[k] || v[k] > upper_[k]) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// AffineExpr

AffineExpr AffineExpr::param(ParamIndex p, std::int64_t coeff) {
  AffineExpr e;
  if (coeff != 0) e.terms_.emplace_back(p, coeff);
  return e;
}

std::int64_t AffineExpr::coefficient(ParamIndex p) const {
  for (const auto& [q, c] : terms_) {
    if (q == p) return c;
  }
  return 0;
}

std::int64_t AffineExpr::eval(std::span<const std::int64_t> v) const {
  std::int64_t value = constant_;
  for (const auto& [p, c] : terms_) value += c * v[p];
  return value;
}

AffineExpr AffineExpr::operator+(const AffineExpr& rhs) const {
  AffineExpr out(constant_ + rhs.constant_);
  out.terms_.reserve(terms_.size() + rhs.terms_.size());
  auto a = terms_.begin();
  auto b = rhs.terms_.begin();
  while (a != terms_.end() || b != rhs.terms_.end()) {
    if (b == rhs.terms_.end() || (a != terms_.end() && a->first < b->first)) {
      out.terms_.push_back(*a++);
    } else if (a == terms_.end() || b->first < a->first) {
      out.terms_.push_back(*b++);
    } else {
      const std::int64_t c = a->second + b->second;
      if (c != 0) out.terms_.emplace_back(a->first, c);
      ++a;
      ++b;
    }
  }
  return out;
}

AffineExpr AffineExpr::operator-() const { return scaled(-1); }

AffineExpr AffineExpr::operator-(const AffineExpr& rhs) const { return *this + (-rhs); }

AffineExpr AffineExpr::scaled(std::int64_t factor) const {
  if (factor == 0) return AffineExpr();
  AffineExpr out(constant_ * factor);
  out.terms_ = terms_;
  for (auto& term : out.terms_) term.second *= factor;
  return out;
}

std::size_t AffineExpr::hash() const {
  std::size_t seed = std::hash<std::int64_t>{}(constant_);
  for (const auto& [p, c] : terms_) {
    hash_combine(seed, p);
    hash_combine(seed, std::hash<std::int64_t>{}(c));
  }
  return seed;
}

std::string AffineExpr::to_string(const std::vector<std::string>& names) const {
  std::ostringstream out;
  bool first = true;
  for (const auto& [p, c] : terms_) {
    const std::string name = p < names.size() ? names[p] : "p" + std::to_string(p);
    std::int64_t mag = c;
    if (first) {
      if (c < 0) {
        out << '-';
        mag = -c;
      }
    } else {
      out << (c < 0 ? " - " : " + ");
      mag = c < 0 ? -c : c;
    }
    if (mag != 1) out << mag << '*';
    out << name;
    first = false;
  }
  if (first) {
    out << constant_;
  } else if (constant_ != 0) {
    out << (constant_ < 0 ? " - " : " + ") << (constant_ < 0 ? -constant_ : constant_);
  }
  return out.str();
}

std::int64_t eval_expr(const AffineExpr& e, std::span<const std::int64_t> v) {
  for (const auto& term : e.terms()) {
    if (term.first >= v.size()) {
      throw std::invalid_argument("eval_expr: valuation misses parameter #" +
                                  std::to_string(term.first));
    }
  }
  return e.eval(v);
}

std::int64_t max_bound(const AffineExpr& e, const ParamBox& box) {
  std::int64_t value = e.constant();
  for (const auto& [p, c] : e.terms()) value += c * (c > 0 ? box.upper(p) : box.lower(p));
  return value;
}

std::int64_t min_bound(const AffineExpr& e, const ParamBox& box) {
  std::int64_t value = e.constant();
  for (const auto& [p, c] : e.terms()) value += c * (c > 0 ? box.lower(p) : box.upper(p));
  return value;
}

// ---------------------------------------------------------------------------
// Constraint

Constraint Constraint::le(const AffineExpr& a, const AffineExpr& b) { return {a - b, false}; }

Constraint Constraint::lt(const AffineExpr& a, const AffineExpr& b) { return {a - b, true}; }

bool Constraint::holds(std::span<const std::int64_t> v) const {
  const std::int64_t value = lhs.eval(v);
  return strict ? value < 0 : value <= 0;
}

Constraint Constraint::negated() const {
  // not (e < 0)  <=>  -e <= 0 ;  not (e <= 0)  <=>  -e < 0
  return {-lhs, !strict};
}

std::size_t Constraint::hash() const {
  std::size_t seed = lhs.hash();
  hash_combine(seed, strict ? 1 : 0);
  return seed;
}

std::string Constraint::to_string(const std::vector<std::string>& names) const {
  return lhs.to_string(names) + (strict ? " < 0" : " <= 0");
}

// ---------------------------------------------------------------------------
// ValuationSet

ValuationSet::ValuationSet(BoxPtr box, bool full) : box_(std::move(box)) {
  const std::size_t n = box_->points();
  words_.assign((n + 63) / 64, full ? ~std::uint64_t{0} : 0);
  if (full && n % 64 != 0) words_.back() = (std::uint64_t{1} << (n % 64)) - 1;
}

bool ValuationSet::contains(std::span<const std::int64_t> v) const {
  return box_->contains(v) && contains(box_->index_of(v));
}

std::size_t ValuationSet::count() const {
  std::size_t n = 0;
  for (const auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

bool ValuationSet::is_empty() const {
  return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

std::optional<std::size_t> ValuationSet::first() const {
  for (std::size_t w = 0; w < words_.size(); ++w) {
    if (words_[w] != 0) return w * 64 + static_cast<std::size_t>(std::countr_zero(words_[w]));
  }
  return std::nullopt;
}

void ValuationSet::check_compatible(const ValuationSet& other) const {
  if (box_ != other.box_ && !(box_ && other.box_ && *box_ == *other.box_)) {
    throw std::invalid_argument("valuation sets over different parameter boxes");
  }
}

ValuationSet ValuationSet::unite(const ValuationSet& other) const {
  ValuationSet out = *this;
  out |= other;
  return out;
}

ValuationSet& ValuationSet::operator|=(const ValuationSet& other) {
  check_compatible(other);
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= other.words_[w];
  return *this;
}

ValuationSet ValuationSet::intersect(const ValuationSet& other) const {
  check_compatible(other);
  ValuationSet out = *this;
  for (std::size_t w = 0; w < words_.size(); ++w) out.words_[w] &= other.words_[w];
  return out;
}

ValuationSet ValuationSet::minus(const ValuationSet& other) const {
  check_compatible(other);
  ValuationSet out = *this;
  for (std::size_t w = 0; w < words_.size(); ++w) out.words_[w] &= ~other.words_[w];
  return out;
}

ValuationSet ValuationSet::complement() const { return full(box_).minus(*this); }

bool ValuationSet::is_subset_of(const ValuationSet& other) const {
  check_compatible(other);
  for (std::size_t w = 0; w < words_.size(); ++w) {
    if ((words_[w] & ~other.words_[w]) != 0) return false;
  }
  return true;
}

std::vector<Valuation> ValuationSet::valuations() const {
  std::vector<Valuation> out;
  out.reserve(count());
  for_each([&](std::size_t i) { out.push_back(box_->point(i)); });
  return out;
}

std::size_t ValuationSet::hash() const {
  std::size_t seed = words_.size();
  for (const auto w : words_) hash_combine(seed, std::hash<std::uint64_t>{}(w));
  return seed;
}

bool ValuationSet::operator==(const ValuationSet& other) const {
  check_compatible(other);
  return words_ == other.words_;
}

nlohmann::ordered_json to_json(const ValuationSet& set) {
  auto out = nlohmann::ordered_json::array();
  const ParamBox& box = set.box();
  Valuation v(box.size());
  set.for_each([&](std::size_t index) {
    box.decode(index, v);
    nlohmann::ordered_json point = nlohmann::ordered_json::object();
    for (std::size_t k = 0; k < box.size(); ++k) point[box.name(static_cast<ParamIndex>(k))] = v[k];
    out.push_back(std::move(point));
  });
  return out;
}

// ---------------------------------------------------------------------------
// ConstraintSet

namespace {

ValuationSet brute_force_extension(const BoxPtr& box, const std::vector<Constraint>& constraints) {
  ValuationSet ext(box, false);
  Valuation v(box->size());
  for (std::size_t i = 0; i < box->points(); ++i) {
    box->decode(i, v);
    const bool ok = std::all_of(constraints.begin(), constraints.end(),
                                [&](const Constraint& c) { return c.holds(v); });
    if (ok) ext.insert(i);
  }
  return ext;
}

}  // namespace

std::shared_ptr<const ConstraintSet::Rep> ConstraintSet::make_rep(BoxPtr box,
                                                                  std::vector<Constraint> constraints,
                                                                  ValuationSet ext) {
  auto rep = std::make_shared<Rep>();
  const std::size_t n = box->size();
  rep->lo.assign(n, 0);
  rep->hi.assign(n, -1);
  bool seen = false;
  Valuation v(n);
  ext.for_each([&](std::size_t index) {
    box->decode(index, v);
    for (std::size_t k = 0; k < n; ++k) {
      if (!seen || v[k] < rep->lo[k]) rep->lo[k] = v[k];
      if (!seen || v[k] > rep->hi[k]) rep->hi[k] = v[k];
    }
    seen = true;
  });
  rep->box = std::move(box);
  rep->constraints = std::move(constraints);
  rep->extension = std::move(ext);
  return rep;
}

ConstraintSet::ConstraintSet(BoxPtr box, std::vector<Constraint> constraints, ValuationSet ext)
    : rep_(make_rep(std::move(box), std::move(constraints), std::move(ext))) {}

ConstraintSet::ConstraintSet(BoxPtr box)
    : ConstraintSet(box, {}, ValuationSet::full(box)) {}

ConstraintSet::ConstraintSet(BoxPtr box, std::vector<Constraint> constraints)
    : ConstraintSet(box, constraints, brute_force_extension(box, constraints)) {}

ConstraintSet ConstraintSet::bounds(BoxPtr box) {
  std::vector<Constraint> cs;
  for (std::size_t k = 0; k < box->size(); ++k) {
    const auto p = AffineExpr::param(static_cast<ParamIndex>(k));
    cs.push_back(Constraint::ge(p, AffineExpr(box->lower(static_cast<ParamIndex>(k)))));
    cs.push_back(Constraint::le(p, AffineExpr(box->upper(static_cast<ParamIndex>(k)))));
  }
  // Every box point satisfies its own bounds.
  return ConstraintSet(box, std::move(cs), ValuationSet::full(box));
}

Coverage ConstraintSet::covers(const Constraint& c) const {
  const Rep& rep = *rep_;
  if (rep.extension.is_empty()) return Coverage::Covers;
  // Range of lhs over the bounding box of the extension.
  std::int64_t lo = c.lhs.constant();
  std::int64_t hi = c.lhs.constant();
  for (const auto& [p, coeff] : c.lhs.terms()) {
    if (coeff > 0) {
      lo += coeff * rep.lo[p];
      hi += coeff * rep.hi[p];
    } else {
      lo += coeff * rep.hi[p];
      hi += coeff * rep.lo[p];
    }
  }
  const auto sat = [&](std::int64_t value) { return c.strict ? value < 0 : value <= 0; };
  if (sat(hi)) return Coverage::Covers;
  if (!sat(lo)) return Coverage::CoversNegation;

  bool any_true = false;
  bool any_false = false;
  Valuation v(rep.box->size());
  rep.extension.for_each([&](std::size_t index) {
    if (any_true && any_false) return;
    rep.box->decode(index, v);
    (c.holds(v) ? any_true : any_false) = true;
  });
  if (!any_false) return Coverage::Covers;
  if (!any_true) return Coverage::CoversNegation;
  return Coverage::Split;
}

ConstraintSet ConstraintSet::with(const Constraint& c) const {
  return split(c).first;
}

std::pair<ConstraintSet, ConstraintSet> ConstraintSet::split(const Constraint& c) const {
  const Rep& rep = *rep_;
  ValuationSet yes(rep.box, false);
  ValuationSet no(rep.box, false);
  Valuation v(rep.box->size());
  rep.extension.for_each([&](std::size_t index) {
    rep.box->decode(index, v);
    (c.holds(v) ? yes : no).insert(index);
  });
  auto extend = [&](const Constraint& added, ValuationSet ext) {
    if (ext == rep.extension) return *this;
    std::vector<Constraint> cs = rep.constraints;
    if (std::find(cs.begin(), cs.end(), added) == cs.end()) cs.push_back(added);
    return ConstraintSet(rep.box, std::move(cs), std::move(ext));
  };
  return {extend(c, std::move(yes)), extend(c.negated(), std::move(no))};
}

ValuationSet extension(const ConstraintSet& c, const BoxPtr& box) {
  if (c.box_ptr() == box || c.box() == *box) return c.extension();
  return brute_force_extension(box, c.constraints());
}

Coverage covers(const ConstraintSet& c_set, const Constraint& c, const BoxPtr& box) {
  if (c_set.box_ptr() == box || c_set.box() == *box) return c_set.covers(c);
  return ConstraintSet(box, c_set.constraints()).covers(c);
}

// ---------------------------------------------------------------------------
// StrictBound

std::size_t StrictBound::hash() const {
  if (infinite) return 0x51ed270b27e1e1ULL;
  std::size_t seed = expr.hash();
  hash_combine(seed, strict ? 3 : 5);
  return seed;
}

std::string StrictBound::to_string(const std::vector<std::string>& names) const {
  if (infinite) return "< inf";
  return std::string(strict ? "< " : "<= ") + expr.to_string(names);
}

StrictBound bound_add(const StrictBound& a, const StrictBound& b) {
  if (a.infinite || b.infinite) return StrictBound::infinity();
  return {a.expr + b.expr, false, a.strict || b.strict};
}

Constraint bound_le_constraint(const StrictBound& a, const StrictBound& b) {
  if (b.infinite) return Constraint::always();
  if (a.infinite) return Constraint::never();
  // (<= => <) is <, every other combination is <=.
  return {a.expr - b.expr, !a.strict && b.strict};
}

}  // namespace ptasynth
