#include "ptasynth/pdbm.hpp"

#include <algorithm>
#include <sstream>

namespace ptasynth {

Pdbm::Pdbm(std::size_t dim) : dim_(dim), m_(dim * dim, StrictBound::le(0)) {}

Dbm Pdbm::evaluate(std::span<const std::int64_t> v) const {
  Dbm out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) {
      const StrictBound& b = at(i, j);
      out.at(i, j) = b.infinite ? dbm::kInfinity : dbm::bound(b.expr.eval(v), b.strict);
    }
  }
  return out;
}

std::size_t Pdbm::hash() const {
  std::size_t seed = dim_;
  for (const auto& b : m_) hash_combine(seed, b.hash());
  return seed;
}

// ---------------------------------------------------------------------------
// Guards

std::vector<Cpdbm> apply_atomic_guard(const Cpdbm& z, const AtomicGuard& g,
                                      SplitCounters* counters) {
  const Constraint keep = bound_le_constraint(z.d.at(g.i, g.j), g.bound);
  const auto tightened = [&](ConstraintSet c) {
    Cpdbm out{std::move(c), z.d, false};
    out.d.at(g.i, g.j) = g.bound;
    return out;
  };
  switch (z.c.covers(keep)) {
    case Coverage::Covers:
      return {z};
    case Coverage::CoversNegation:
      return {tightened(z.c)};
    case Coverage::Split:
      break;
  }
  if (counters != nullptr) ++counters->guard;
  auto [yes, no] = z.c.split(keep);
  return {Cpdbm{std::move(yes), z.d, z.canonical}, tightened(std::move(no))};
}

std::vector<Cpdbm> apply_guard(const Cpdbm& z, const Guard& g, SplitCounters* counters) {
  std::vector<Cpdbm> current{z};
  for (const AtomicGuard& atom : g) {
    std::vector<Cpdbm> next;
    for (const Cpdbm& branch : current) {
      for (Cpdbm& out : apply_atomic_guard(branch, atom, counters)) {
        if (out.c.is_satisfiable()) next.push_back(std::move(out));
      }
    }
    current = std::move(next);
  }
  return current;
}

// ---------------------------------------------------------------------------
// Canonical form

namespace {

// d evaluated on [[other.c]] coincides with other.d.
bool evaluates_like(const Pdbm& d, const Cpdbm& other) {
  const std::size_t n = d.dim();
  std::vector<std::pair<const StrictBound*, const StrictBound*>> differing;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const StrictBound& a = d.at(i, j);
      const StrictBound& b = other.d.at(i, j);
      if (a == b) continue;
      if (a.infinite || b.infinite || a.strict != b.strict) return false;
      differing.emplace_back(&a, &b);
    }
  }
  if (differing.empty()) return true;
  const ParamBox& box = other.c.box();
  Valuation v(box.size());
  bool same = true;
  other.c.extension().for_each([&](std::size_t index) {
    if (!same) return;
    box.decode(index, v);
    for (const auto& [a, b] : differing) {
      if (a->expr.eval(v) != b->expr.eval(v)) {
        same = false;
        return;
      }
    }
  });
  return same;
}

std::optional<ConstraintSet> merged_constraints(const ConstraintSet& a, const ConstraintSet& b) {
  const ValuationSet target = a.extension().unite(b.extension());
  const ParamBox& box = a.box();
  std::vector<Constraint> kept;
  Valuation v(box.size());
  const auto holds_on_target = [&](const Constraint& c) {
    bool ok = true;
    target.for_each([&](std::size_t index) {
      if (!ok) return;
      box.decode(index, v);
      ok = c.holds(v);
    });
    return ok;
  };
  for (const auto* list : {&a.constraints(), &b.constraints()}) {
    for (const Constraint& c : *list) {
      if (std::find(kept.begin(), kept.end(), c) != kept.end()) continue;
      if (holds_on_target(c)) kept.push_back(c);
    }
  }
  ConstraintSet merged(a.box_ptr(), std::move(kept));
  if (!(merged.extension() == target)) return std::nullopt;
  return merged;
}

// Joins branches whose matrices agree on each other's extension.
void merge_branches(std::vector<Cpdbm>& branches, SplitCounters* counters) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t a = 0; a < branches.size() && !changed; ++a) {
      for (std::size_t b = a + 1; b < branches.size(); ++b) {
        const Pdbm* matrix = nullptr;
        if (evaluates_like(branches[a].d, branches[b])) {
          matrix = &branches[a].d;
        } else if (evaluates_like(branches[b].d, branches[a])) {
          matrix = &branches[b].d;
        } else {
          continue;
        }
        auto merged = merged_constraints(branches[a].c, branches[b].c);
        if (!merged) continue;
        Cpdbm joined{std::move(*merged), *matrix, true};
        branches[a] = std::move(joined);
        branches.erase(branches.begin() + static_cast<std::ptrdiff_t>(b));
        if (counters != nullptr) ++counters->merged;
        changed = true;
        break;
      }
    }
  }
}

void floyd_warshall(const Cpdbm& z, std::vector<Cpdbm>& out, SplitCounters* counters) {
  const std::size_t n = z.d.dim();
  const std::size_t steps = n * n * n;
  struct Item {
    Cpdbm z;
    std::size_t step;
  };
  std::vector<Item> pending;
  pending.push_back({z, 0});
  while (!pending.empty()) {
    Item item = std::move(pending.back());
    pending.pop_back();
    Cpdbm& cur = item.z;
    bool alive = true;
    for (std::size_t step = item.step; step < steps && alive; ++step) {
      const std::size_t k = step / (n * n);
      const std::size_t i = (step / n) % n;
      const std::size_t j = step % n;
      if (k == i || k == j) continue;
      const StrictBound& ik = cur.d.at(i, k);
      const StrictBound& kj = cur.d.at(k, j);
      if (ik.infinite || kj.infinite) continue;
      StrictBound via = bound_add(ik, kj);
      const Constraint keep = bound_le_constraint(cur.d.at(i, j), via);
      switch (cur.c.covers(keep)) {
        case Coverage::Covers:
          break;
        case Coverage::CoversNegation:
          if (i == j) {
            alive = false;
          } else {
            cur.d.at(i, j) = std::move(via);
          }
          break;
        case Coverage::Split: {
          auto [yes, no] = cur.c.split(keep);
          if (i == j) {
            if (counters != nullptr) ++counters->emptiness;
          } else {
            if (counters != nullptr) ++counters->canonicalize;
            Item other{Cpdbm{std::move(no), cur.d, false}, step + 1};
            other.z.d.at(i, j) = std::move(via);
            pending.push_back(std::move(other));
          }
          cur.c = std::move(yes);
          break;
        }
      }
    }
    if (alive) {
      cur.canonical = true;
      out.push_back(std::move(cur));
    }
  }
}

}  // namespace

std::vector<Cpdbm> canonicalize_all(const std::vector<Cpdbm>& zs, SplitCounters* counters) {
  std::vector<Cpdbm> out;
  for (const Cpdbm& z : zs) {
    if (!z.c.is_satisfiable()) continue;
    if (z.canonical) {
      out.push_back(z);
    } else {
      floyd_warshall(z, out, counters);
    }
  }
  if (out.size() > 1) merge_branches(out, counters);
  return out;
}

std::vector<Cpdbm> canonicalize(const Cpdbm& z, SplitCounters* counters) {
  return canonicalize_all({z}, counters);
}

// ---------------------------------------------------------------------------
// Reset, delay, extrapolation

Cpdbm reset(const Cpdbm& z, const std::vector<std::size_t>& clocks) {
  std::vector<std::size_t> order = clocks;
  std::sort(order.begin(), order.end());
  order.erase(std::unique(order.begin(), order.end()), order.end());
  Cpdbm out = z;
  const std::size_t n = out.d.dim();
  for (const std::size_t r : order) {
    if (r == 0 || r >= n) throw DomainError("reset: invalid clock index " + std::to_string(r));
    for (std::size_t j = 0; j < n; ++j) {
      if (j == r) continue;
      out.d.at(r, j) = out.d.at(0, j);
      out.d.at(j, r) = out.d.at(j, 0);
    }
  }
  return out;
}

Cpdbm up(const Cpdbm& z) {
  Cpdbm out = z;
  for (std::size_t i = 1; i < out.d.dim(); ++i) out.d.at(i, 0) = StrictBound::infinity();
  return out;
}

std::vector<Cpdbm> extrapolate_pk(const Cpdbm& z, const std::vector<std::int64_t>& max,
                                  SplitCounters* counters) {
  const std::size_t n = z.d.dim();
  struct Item {
    Cpdbm z;
    std::size_t entry;
    // Whether the upper test has already failed for `entry`.
    bool lower_only;
  };
  std::vector<Cpdbm> out;
  std::vector<Item> pending;
  pending.push_back({z, 0, false});
  while (!pending.empty()) {
    Item item = std::move(pending.back());
    pending.pop_back();
    Cpdbm& cur = item.z;
    for (std::size_t e = item.entry; e < n * n; ++e) {
      const std::size_t i = e / n;
      const std::size_t j = e % n;
      const bool lower_only = item.lower_only && e == item.entry;
      const StrictBound b = cur.d.at(i, j);
      if (i == j || b.infinite) continue;

      if (!lower_only) {
        // e > M(x_i)  <=>  M(x_i) - e < 0
        const Constraint above{AffineExpr(max[i]) - b.expr, true};
        const Coverage cov = cur.c.covers(above);
        if (cov == Coverage::Covers) {
          cur.d.at(i, j) = StrictBound::infinity();
          cur.canonical = false;
          continue;
        }
        if (cov == Coverage::Split) {
          if (counters != nullptr) ++counters->extrapolate;
          auto [yes, no] = cur.c.split(above);
          pending.push_back({Cpdbm{std::move(no), cur.d, cur.canonical}, e, true});
          cur.c = std::move(yes);
          cur.d.at(i, j) = StrictBound::infinity();
          cur.canonical = false;
          continue;
        }
      }

      // e < -M(x_j)  <=>  e + M(x_j) < 0
      const Constraint below{b.expr + max[j], true};
      const Coverage cov = cur.c.covers(below);
      if (cov == Coverage::CoversNegation) continue;
      if (cov == Coverage::Split) {
        if (counters != nullptr) ++counters->extrapolate;
        auto [yes, no] = cur.c.split(below);
        pending.push_back({Cpdbm{std::move(no), cur.d, cur.canonical}, e + 1, false});
        cur.c = std::move(yes);
      }
      cur.d.at(i, j) = StrictBound::lt(-max[j]);
      cur.canonical = false;
    }
    out.push_back(std::move(cur));
  }
  return out;
}

Dbm evaluate(const Cpdbm& z, std::span<const std::int64_t> v) {
  const ParamBox& box = z.c.box();
  if (!box.contains(v) || !z.c.extension().contains(box.index_of(v))) {
    throw DomainError("evaluate: valuation outside the constraint set");
  }
  return z.d.evaluate(v);
}

Cpdbm initial_cpdbm(std::size_t dim, const BoxPtr& box) {
  Cpdbm z{ConstraintSet::bounds(box), Pdbm(dim), true};
  return up(z);
}

std::string dump(const Cpdbm& z, const std::vector<std::string>& clocks) {
  const auto& names = z.c.box().names();
  const auto clock_name = [&](std::size_t i) -> std::string {
    if (i == 0) return "0";
    return i < clocks.size() ? clocks[i] : "x" + std::to_string(i);
  };
  std::ostringstream out;
  for (std::size_t i = 0; i < z.d.dim(); ++i) {
    for (std::size_t j = 0; j < z.d.dim(); ++j) {
      const StrictBound& b = z.d.at(i, j);
      if (i == j || b.infinite) continue;
      out << clock_name(i) << " - " << clock_name(j) << ' ' << b.to_string(names) << '\n';
    }
  }
  out << "where:\n";
  for (const Constraint& c : z.c.constraints()) out << "  " << c.to_string(names) << '\n';
  return out.str();
}

}  // namespace ptasynth
