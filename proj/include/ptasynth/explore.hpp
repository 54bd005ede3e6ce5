#pragma once

// Symbolic exploration of a PTBA: successor generation over CPDBMs, the
// two-level state store, Cumulative NDFS and deadlock accumulation.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "ptasynth/ltl.hpp"
#include "ptasynth/model.hpp"
#include "ptasynth/pdbm.hpp"

namespace ptasynth {

/// Everything both engines derive from (network, property).
struct Prepared {
  BoxPtr box;
  ltl::FormulaPtr property;
  ltl::BuchiAutomaton ba;  // of the negated property
  Pta pta;
  Ptba ptba;  // product, after the non-Zeno transformation
  std::vector<std::int64_t> max;
};

Prepared prepare(const Network& net, const ltl::FormulaPtr& property);

struct SymbolicState {
  std::size_t location = 0;
  Cpdbm zone;
};

struct Limits {
  std::uint64_t max_states = std::uint64_t{1} << 22;
  std::size_t dnf_conjuncts = 4096;
};

struct ExploreOptions {
  Limits limits;
  bool prune_found = true;
  bool deadlocks = true;
#ifdef NDEBUG
  bool check_monotonicity = false;
#else
  bool check_monotonicity = true;
#endif
  bool check_cycles = true;
  bool check_range = true;
  std::ostream* trace = nullptr;
};

struct ExploreStats {
  std::uint64_t stored_states = 0;
  std::uint64_t representatives = 0;
  std::uint64_t m1_buckets = 0;
  std::uint64_t m2_hits = 0;
  std::uint64_t m2_misses = 0;
  std::uint64_t semantic_comparisons = 0;
  std::uint64_t outer_visits = 0;
  std::uint64_t inner_visits = 0;
  std::uint64_t transitions = 0;
  std::uint64_t cycles = 0;
  std::uint64_t pruned = 0;
  std::uint64_t deadlock_checks = 0;
  std::uint64_t swept_states = 0;
  std::uint64_t monotonicity_violations = 0;
  std::uint64_t cycle_violations = 0;
  SplitCounters splits;
  std::vector<Valuation> witnesses;

  nlohmann::ordered_json to_json(const ParamBox& box) const;
};

struct SynthesisResult {
  ValuationSet accepted;
  ValuationSet satisfying;
  ValuationSet deadlock;
  /// Deterministic counters only, so the JSON document is byte-stable.
  nlohmann::ordered_json stats;
  double seconds = 0;
  /// Stored symbolic states, or summed per-valuation zone states.
  std::uint64_t work = 0;
};

nlohmann::ordered_json to_json(const SynthesisResult& r);

struct SearchData {
  bool in_outer = false;
  bool in_inner = false;
  bool on_stack = false;
};

/// Storage for (location, zone) pairs keyed by zone semantics. Zones are
/// resolved to a representative through a structural cache (M2) and, on a
/// miss, a bucket of candidates sharing a semantic signature (M1).
class StateStore {
 public:
  explicit StateStore(ExploreStats* stats = nullptr) : stats_(stats) {}

  /// Index of the stored state, inserting it with initial data if unseen.
  std::size_t intern(std::size_t location, const Cpdbm& zone, bool* inserted = nullptr);
  std::optional<std::size_t> find(std::size_t location, const Cpdbm& zone);

  SearchData get_data(std::size_t location, const Cpdbm& zone);
  void set_data(std::size_t location, const Cpdbm& zone, const SearchData& data);

  SearchData& data(std::size_t id) { return states_[id].data; }
  const SymbolicState& state(std::size_t id) const { return states_[id].state; }
  std::size_t size() const { return states_.size(); }
  std::size_t representatives() const { return reps_.size(); }
  std::size_t buckets() const { return m1_.size(); }

  static std::size_t signature(const Cpdbm& zone);
  static bool same_semantics(const Cpdbm& a, const Cpdbm& b);

 private:
  struct Stored {
    SymbolicState state;
    SearchData data;
  };
  struct StructuralEntry {
    ValuationSet extension;
    Pdbm matrix;
    std::size_t rep;
  };

  std::size_t resolve(const Cpdbm& zone);
  std::optional<std::size_t> lookup_rep(const Cpdbm& zone);

  ExploreStats* stats_;
  std::vector<Cpdbm> reps_;
  std::unordered_map<std::size_t, std::vector<StructuralEntry>> m2_;
  std::unordered_map<std::size_t, std::vector<std::size_t>> m1_;
  std::unordered_map<std::uint64_t, std::size_t> storage_;
  std::vector<Stored> states_;
};

class SymbolicExplorer {
 public:
  SymbolicExplorer(const Ptba& a, std::vector<std::int64_t> max, ExploreOptions options = {});

  std::vector<Cpdbm> initial_zones();
  /// (edge index, successor zone) pairs in edge order, then branch order.
  std::vector<std::pair<std::size_t, SymbolicState>> successors(const SymbolicState& s);
  /// Valuations for which some point of the zone enables no model edge.
  ValuationSet deadlock_valuations(const SymbolicState& s);

  /// Cumulative NDFS from every initial state; returns Found.
  ValuationSet cumulative_ndfs();

  const ValuationSet& deadlock() const { return deadlock_; }
  ExploreStats& stats() { return stats_; }
  StateStore& store() { return store_; }
  const Ptba& ptba() const { return a_; }
  const std::vector<std::int64_t>& max() const { return max_; }

 private:
  const std::vector<std::size_t>& successor_ids(std::size_t id);
  void check_deadlock(std::size_t id);
  void outer_dfs(std::size_t root);
  void inner_dfs(std::size_t root);
  void sweep_deadlocks();
  bool covered(std::size_t id) const;
  void trace_state(const char* tag, std::size_t id);

  const Ptba& a_;
  std::vector<std::int64_t> max_;
  ExploreOptions options_;
  std::vector<std::vector<std::size_t>> out_;
  ExploreStats stats_;
  StateStore store_;
  ValuationSet found_;
  ValuationSet deadlock_;
  std::vector<std::optional<std::vector<std::size_t>>> succ_cache_;
  std::vector<bool> deadlock_checked_;
  std::vector<std::size_t> stack_;
  std::vector<std::size_t> pruned_;
};

/// Every finite entry of every stored zone, evaluated at every valuation of
/// its extension, within [-M(x_j), M(x_i)]. Returns the number of entries
/// outside that range.
std::uint64_t count_range_violations(const StateStore& store, const std::vector<std::int64_t>& max);

SynthesisResult synthesize(const Prepared& p, const ExploreOptions& options = {});

}  // namespace ptasynth
