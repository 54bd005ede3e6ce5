#pragma once

// Explicit enumeration: one concrete zone graph and NDFS per valuation.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ptasynth/dbm.hpp"
#include "ptasynth/explore.hpp"
#include "ptasynth/model.hpp"

namespace ptasynth {

struct ConcreteAtom {
  std::size_t i = 0;
  std::size_t j = 0;
  raw_t raw = dbm::kInfinity;
};

using ConcreteGuard = std::vector<ConcreteAtom>;

struct TimedBuchiEdge {
  std::size_t src = 0;
  std::size_t dst = 0;
  ConcreteGuard guard;
  std::vector<std::size_t> resets;
};

/// A PTBA with every parameter replaced by its value.
struct TimedBuchi {
  std::size_t dim = 1;
  std::size_t initial = 0;
  std::vector<ConcreteGuard> invariants;
  std::vector<bool> accepting;
  std::vector<TimedBuchiEdge> edges;
  std::vector<std::vector<std::size_t>> outgoing;
  /// Guards of the model's outgoing edges, per PTBA location.
  std::vector<std::vector<ConcreteGuard>> model_guards;
};

TimedBuchi instantiate(const Ptba& a, const Valuation& v);

struct ConcreteZoneState {
  std::size_t location = 0;
  Dbm zone;
  bool operator==(const ConcreteZoneState& other) const = default;
};

/// Successor function of the k-extrapolated zone graph.
class ZoneGraph {
 public:
  ZoneGraph(const TimedBuchi& a, std::vector<std::int64_t> max)
      : a_(a), max_(std::move(max)) {}

  /// Empty if the initial invariant is unsatisfiable.
  std::vector<ConcreteZoneState> initial() const;
  std::vector<std::pair<std::size_t, ConcreteZoneState>> successors(const ConcreteZoneState& s) const;
  /// Some point of the zone enables no model edge.
  bool deadlocked(const ConcreteZoneState& s) const;

 private:
  bool finish(Dbm& z, std::size_t location) const;

  const TimedBuchi& a_;
  std::vector<std::int64_t> max_;
};

struct BaselineOptions {
  std::uint64_t max_states = std::uint64_t{1} << 22;
  unsigned threads = 1;
};

struct ValuationCheck {
  bool accepting = false;
  bool deadlock = false;
  std::uint64_t states = 0;
};

ValuationCheck check_valuation(const TimedBuchi& a, const std::vector<std::int64_t>& max,
                               const BaselineOptions& options = {});
ValuationCheck check_valuation(const Ptba& a, const Valuation& v,
                               const std::vector<std::int64_t>& max,
                               const BaselineOptions& options = {});

SynthesisResult enumerate(const Prepared& p, const BaselineOptions& options = {});

}  // namespace ptasynth
