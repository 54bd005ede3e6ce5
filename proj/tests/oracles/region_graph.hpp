#pragma once

// Region-graph model checker for instantiated automata with simple guards.
// A state is (location, region right after an action); its delay closure
// plays the role of the zone.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "ptasynth/baseline.hpp"

namespace oracle {

struct Region {
  // Integer part per clock (index 0 unused); max + 1 means "above max".
  std::vector<std::int64_t> ip;
  // groups[0]: bounded clocks with zero fraction; then increasing fractions.
  std::vector<std::vector<std::size_t>> groups;

  auto operator<=>(const Region& other) const = default;
};

class RegionGraph {
 public:
  RegionGraph(const ptasynth::TimedBuchi& a, std::vector<std::int64_t> max)
      : a_(a), max_(std::move(max)) {}

  struct Result {
    bool accepting = false;
    bool deadlock = false;
    std::size_t states = 0;
  };

  Result check() const {
    Region zero;
    zero.ip.assign(a_.dim, 0);
    zero.groups.emplace_back();
    for (std::size_t c = 1; c < a_.dim; ++c) zero.groups[0].push_back(c);

    std::map<std::pair<std::size_t, Region>, std::size_t> ids;
    std::vector<std::pair<std::size_t, Region>> states;
    std::vector<std::vector<std::size_t>> succ;
    Result r;
    const auto add = [&](std::size_t loc, const Region& reg) -> std::optional<std::size_t> {
      if (closure(loc, reg).empty()) return std::nullopt;
      auto key = std::make_pair(loc, reg);
      auto it = ids.find(key);
      if (it != ids.end()) return it->second;
      const std::size_t id = states.size();
      ids.emplace(key, id);
      states.push_back(key);
      succ.emplace_back();
      return id;
    };
    add(a_.initial, zero);
    for (std::size_t id = 0; id < states.size(); ++id) {
      const auto [loc, reg] = states[id];
      std::set<std::size_t> out;
      for (const Region& point : closure(loc, reg)) {
        bool enabled = false;
        for (const auto& g : a_.model_guards[loc]) enabled = enabled || holds(point, g);
        if (!enabled) r.deadlock = true;
        for (const std::size_t ei : a_.outgoing[loc]) {
          const auto& e = a_.edges[ei];
          if (!holds(point, e.guard)) continue;
          Region next = point;
          for (const std::size_t c : e.resets) reset(next, c);
          if (auto t = add(e.dst, next)) out.insert(*t);
        }
      }
      succ[id].assign(out.begin(), out.end());
    }
    r.states = states.size();
    for (std::size_t s = 0; s < states.size() && !r.accepting; ++s) {
      if (!a_.accepting[states[s].first]) continue;
      std::vector<char> seen(states.size(), 0);
      std::vector<std::size_t> work(succ[s].begin(), succ[s].end());
      while (!work.empty()) {
        const std::size_t t = work.back();
        work.pop_back();
        if (t == s) {
          r.accepting = true;
          break;
        }
        if (seen[t]) continue;
        seen[t] = 1;
        work.insert(work.end(), succ[t].begin(), succ[t].end());
      }
    }
    return r;
  }

 private:
  bool bounded(const Region& r, std::size_t c) const { return r.ip[c] <= max_[c]; }

  // Numerator of the clock value over denominator groups.size().
  std::int64_t scaled(const Region& r, std::size_t c) const {
    const auto den = static_cast<std::int64_t>(r.groups.size());
    if (c == 0) return 0;
    if (!bounded(r, c)) return (max_[c] + 1) * den;
    for (std::size_t g = 0; g < r.groups.size(); ++g) {
      if (std::find(r.groups[g].begin(), r.groups[g].end(), c) != r.groups[g].end()) {
        return r.ip[c] * den + static_cast<std::int64_t>(g);
      }
    }
    return 0;
  }

  bool holds(const Region& r, const ptasynth::ConcreteGuard& g) const {
    const auto den = static_cast<std::int64_t>(r.groups.size());
    for (const auto& atom : g) {
      const std::int64_t lhs = scaled(r, atom.i) - scaled(r, atom.j);
      const std::int64_t rhs = ptasynth::dbm::value_of(atom.raw) * den;
      const bool ok = ptasynth::dbm::is_strict(atom.raw) ? lhs < rhs : lhs <= rhs;
      if (!ok) return false;
    }
    return true;
  }

  void reset(Region& r, std::size_t c) const {
    for (auto& g : r.groups) g.erase(std::remove(g.begin(), g.end(), c), g.end());
    r.ip[c] = 0;
    r.groups[0].push_back(c);
    normalize(r);
  }

  static void normalize(Region& r) {
    for (auto& g : r.groups) std::sort(g.begin(), g.end());
    r.groups.erase(std::remove_if(r.groups.begin() + 1, r.groups.end(),
                                  [](const auto& g) { return g.empty(); }),
                   r.groups.end());
  }

  std::optional<Region> delay(const Region& r) const {
    Region n = r;
    if (!n.groups[0].empty()) {
      std::vector<std::size_t> moving;
      for (const std::size_t c : n.groups[0]) {
        if (n.ip[c] == max_[c]) {
          n.ip[c] = max_[c] + 1;
        } else {
          moving.push_back(c);
        }
      }
      n.groups[0].clear();
      if (!moving.empty()) n.groups.insert(n.groups.begin() + 1, moving);
      normalize(n);
      return n;
    }
    if (n.groups.size() == 1) return std::nullopt;
    std::vector<std::size_t> last = n.groups.back();
    n.groups.pop_back();
    for (const std::size_t c : last) ++n.ip[c];
    n.groups[0] = last;
    normalize(n);
    return n;
  }

  // Delay successors satisfying the invariant.
  std::vector<Region> closure(std::size_t loc, const Region& start) const {
    std::vector<Region> out;
    std::optional<Region> cur = start;
    while (cur) {
      if (holds(*cur, a_.invariants[loc])) out.push_back(*cur);
      cur = delay(*cur);
    }
    return out;
  }

  const ptasynth::TimedBuchi& a_;
  std::vector<std::int64_t> max_;
};

}  // namespace oracle
