#include "ptasynth/explore.hpp"

#include <algorithm>
#include <chrono>
#include <ostream>

namespace ptasynth {

Prepared prepare(const Network& net, const ltl::FormulaPtr& property) {
  Prepared p;
  p.box = net.box;
  p.property = property;
  p.ba = ltl::to_buchi(ltl::to_nnf(ltl::make_unary(ltl::Op::Not, property)));
  p.pta = compose(net);
  const Labelling lab = label(net, p.pta, p.ba.atoms);
  p.ptba = make_nonzeno(product(p.pta, lab, p.ba));
  p.max = clock_maxima(p.ptba);
  return p;
}

// ---------------------------------------------------------------------------
// Statistics

nlohmann::ordered_json ExploreStats::to_json(const ParamBox& box) const {
  nlohmann::ordered_json j;
  j["engine"] = "symbolic";
  j["stored_states"] = stored_states;
  j["representatives"] = representatives;
  j["m1_buckets"] = m1_buckets;
  j["m2_hits"] = m2_hits;
  j["m2_misses"] = m2_misses;
  j["semantic_comparisons"] = semantic_comparisons;
  j["outer_visits"] = outer_visits;
  j["inner_visits"] = inner_visits;
  j["transitions"] = transitions;
  j["cycles"] = cycles;
  j["pruned"] = pruned;
  j["deadlock_checks"] = deadlock_checks;
  j["swept_states"] = swept_states;
  j["splits"] = {{"guard", splits.guard},
                 {"canonicalize", splits.canonicalize},
                 {"emptiness", splits.emptiness},
                 {"extrapolate", splits.extrapolate},
                 {"merged", splits.merged}};
  j["monotonicity_violations"] = monotonicity_violations;
  j["cycle_violations"] = cycle_violations;
  auto w = nlohmann::ordered_json::array();
  for (const Valuation& v : witnesses) {
    nlohmann::ordered_json point = nlohmann::ordered_json::object();
    for (std::size_t k = 0; k < box.size(); ++k) point[box.name(static_cast<ParamIndex>(k))] = v[k];
    w.push_back(std::move(point));
  }
  j["witnesses"] = std::move(w);
  return j;
}

nlohmann::ordered_json to_json(const SynthesisResult& r) {
  nlohmann::ordered_json j;
  j["satisfying"] = to_json(r.satisfying);
  j["violating"] = to_json(r.accepted);
  j["deadlock"] = to_json(r.deadlock);
  j["stats"] = r.stats;
  return j;
}

// ---------------------------------------------------------------------------
// State store

std::size_t StateStore::signature(const Cpdbm& zone) {
  std::size_t seed = zone.c.extension().hash();
  const ParamBox& box = zone.c.box();
  Valuation v(box.size());
  zone.c.extension().for_each([&](std::size_t index) {
    box.decode(index, v);
    hash_combine(seed, zone.d.evaluate(v).hash());
  });
  return seed;
}

bool StateStore::same_semantics(const Cpdbm& a, const Cpdbm& b) {
  if (!(a.c.extension() == b.c.extension())) return false;
  if (a.d == b.d) return true;
  const ParamBox& box = a.c.box();
  Valuation v(box.size());
  bool same = true;
  a.c.extension().for_each([&](std::size_t index) {
    if (!same) return;
    box.decode(index, v);
    same = a.d.evaluate(v) == b.d.evaluate(v);
  });
  return same;
}

namespace {

std::size_t structural_hash(const Cpdbm& z) {
  std::size_t seed = z.c.extension().hash();
  hash_combine(seed, z.d.hash());
  return seed;
}

}  // namespace

std::optional<std::size_t> StateStore::lookup_rep(const Cpdbm& zone) {
  const std::size_t h = structural_hash(zone);
  auto it = m2_.find(h);
  if (it != m2_.end()) {
    for (const StructuralEntry& e : it->second) {
      if (e.matrix == zone.d && e.extension == zone.c.extension()) {
        if (stats_ != nullptr) ++stats_->m2_hits;
        return e.rep;
      }
    }
  }
  if (stats_ != nullptr) ++stats_->m2_misses;
  const std::size_t sig = signature(zone);
  auto bucket = m1_.find(sig);
  if (bucket == m1_.end()) return std::nullopt;
  for (const std::size_t rep : bucket->second) {
    if (stats_ != nullptr) ++stats_->semantic_comparisons;
    if (same_semantics(reps_[rep], zone)) {
      m2_[h].push_back({zone.c.extension(), zone.d, rep});
      return rep;
    }
  }
  return std::nullopt;
}

std::size_t StateStore::resolve(const Cpdbm& zone) {
  if (auto rep = lookup_rep(zone)) return *rep;
  const std::size_t rep = reps_.size();
  reps_.push_back(zone);
  m1_[signature(zone)].push_back(rep);
  m2_[structural_hash(zone)].push_back({zone.c.extension(), zone.d, rep});
  return rep;
}

namespace {
std::uint64_t storage_key(std::size_t location, std::size_t rep) {
  return (static_cast<std::uint64_t>(location) << 32) | static_cast<std::uint64_t>(rep);
}
}  // namespace

std::size_t StateStore::intern(std::size_t location, const Cpdbm& zone, bool* inserted) {
  const std::size_t rep = resolve(zone);
  const std::uint64_t key = storage_key(location, rep);
  auto it = storage_.find(key);
  if (inserted != nullptr) *inserted = it == storage_.end();
  if (it != storage_.end()) return it->second;
  const std::size_t id = states_.size();
  states_.push_back({SymbolicState{location, reps_[rep]}, SearchData{}});
  storage_.emplace(key, id);
  return id;
}

std::optional<std::size_t> StateStore::find(std::size_t location, const Cpdbm& zone) {
  const auto rep = lookup_rep(zone);
  if (!rep) return std::nullopt;
  auto it = storage_.find(storage_key(location, *rep));
  if (it == storage_.end()) return std::nullopt;
  return it->second;
}

SearchData StateStore::get_data(std::size_t location, const Cpdbm& zone) {
  return states_[intern(location, zone)].data;
}

void StateStore::set_data(std::size_t location, const Cpdbm& zone, const SearchData& data) {
  states_[intern(location, zone)].data = data;
}

// ---------------------------------------------------------------------------
// Successors

SymbolicExplorer::SymbolicExplorer(const Ptba& a, std::vector<std::int64_t> max,
                                   ExploreOptions options)
    : a_(a),
      max_(std::move(max)),
      options_(options),
      out_(a.outgoing()),
      store_(&stats_),
      found_(a.box, false),
      deadlock_(a.box, false) {}

std::vector<Cpdbm> SymbolicExplorer::initial_zones() {
  SplitCounters* sc = &stats_.splits;
  const Cpdbm start = initial_cpdbm(a_.dim(), a_.box);
  std::vector<Cpdbm> zs =
      canonicalize_all(apply_guard(start, a_.locations[a_.initial].invariant, sc), sc);
  std::vector<Cpdbm> extrapolated;
  for (const Cpdbm& z : zs) {
    for (Cpdbm& e : extrapolate_pk(z, max_, sc)) extrapolated.push_back(std::move(e));
  }
  return canonicalize_all(extrapolated, sc);
}

std::vector<std::pair<std::size_t, SymbolicState>> SymbolicExplorer::successors(
    const SymbolicState& s) {
  SplitCounters* sc = &stats_.splits;
  std::vector<std::pair<std::size_t, SymbolicState>> out;
  for (const std::size_t ei : out_[s.location]) {
    const PtaEdge& e = a_.edges[ei];
    const Guard& inv = a_.locations[e.dst].invariant;
    std::vector<Cpdbm> guarded = canonicalize_all(apply_guard(s.zone, e.guard, sc), sc);
    std::vector<Cpdbm> entered;
    for (const Cpdbm& z : guarded) {
      for (Cpdbm& w : apply_guard(up(reset(z, e.resets)), inv, sc)) entered.push_back(std::move(w));
    }
    std::vector<Cpdbm> extrapolated;
    for (const Cpdbm& z : canonicalize_all(entered, sc)) {
      for (Cpdbm& w : extrapolate_pk(z, max_, sc)) extrapolated.push_back(std::move(w));
    }
    for (Cpdbm& z : canonicalize_all(extrapolated, sc)) {
      if (options_.check_monotonicity && !z.c.extension().is_subset_of(s.zone.c.extension())) {
        ++stats_.monotonicity_violations;
      }
      out.emplace_back(ei, SymbolicState{e.dst, std::move(z)});
    }
  }
  return out;
}

ValuationSet SymbolicExplorer::deadlock_valuations(const SymbolicState& s) {
  SplitCounters* sc = &stats_.splits;
  const std::size_t model_loc = a_.locations[s.location].model_location;
  std::vector<Cpdbm> current{s.zone};
  for (const Guard& g : a_.model_guards[model_loc]) {
    // not (a1 && ... && ak) = not a1 || ... || not ak
    std::vector<Cpdbm> next;
    for (const Cpdbm& z : current) {
      for (const AtomicGuard& atom : g) {
        const AtomicGuard negated{atom.j, atom.i,
                                  StrictBound{-atom.bound.expr, false, !atom.bound.strict}};
        for (Cpdbm& w : canonicalize_all(apply_atomic_guard(z, negated, sc), sc)) {
          next.push_back(std::move(w));
        }
      }
    }
    if (next.size() > options_.limits.dnf_conjuncts) {
      throw CapacityError("deadlock check exceeds " + std::to_string(options_.limits.dnf_conjuncts) +
                          " conjuncts");
    }
    current = std::move(next);
    if (current.empty()) break;
  }
  ValuationSet out(a_.box, false);
  for (const Cpdbm& z : current) out |= z.c.extension();
  return out;
}

// ---------------------------------------------------------------------------
// Cumulative NDFS

const std::vector<std::size_t>& SymbolicExplorer::successor_ids(std::size_t id) {
  if (succ_cache_.size() <= id) succ_cache_.resize(id + 1);
  if (succ_cache_[id]) return *succ_cache_[id];
  const SymbolicState s = store_.state(id);
  std::vector<std::size_t> ids;
  for (auto& [edge, t] : successors(s)) {
    (void)edge;
    ++stats_.transitions;
    const std::size_t tid = store_.intern(t.location, t.zone);
    if (store_.size() > options_.limits.max_states) {
      throw CapacityError("stored states exceed " + std::to_string(options_.limits.max_states));
    }
    if (std::find(ids.begin(), ids.end(), tid) == ids.end()) ids.push_back(tid);
  }
  if (succ_cache_.size() <= id) succ_cache_.resize(id + 1);
  succ_cache_[id] = std::move(ids);
  return *succ_cache_[id];
}

bool SymbolicExplorer::covered(std::size_t id) const {
  return options_.prune_found && store_.state(id).zone.c.extension().is_subset_of(found_);
}

void SymbolicExplorer::check_deadlock(std::size_t id) {
  if (!options_.deadlocks) return;
  if (deadlock_checked_.size() <= id) deadlock_checked_.resize(id + 1, false);
  if (deadlock_checked_[id]) return;
  deadlock_checked_[id] = true;
  const SymbolicState s = store_.state(id);
  if (s.zone.c.extension().is_subset_of(deadlock_)) return;
  ++stats_.deadlock_checks;
  deadlock_ |= deadlock_valuations(s);
}

void SymbolicExplorer::trace_state(const char* tag, std::size_t id) {
  if (options_.trace == nullptr) return;
  const SymbolicState& s = store_.state(id);
  *options_.trace << tag << " #" << id << " @ " << a_.locations[s.location].name << '\n'
                  << dump(s.zone, a_.clocks);
}

void SymbolicExplorer::outer_dfs(std::size_t root) {
  struct Frame {
    std::size_t id;
    std::size_t next;
  };
  std::vector<Frame> frames;
  const auto enter = [&](std::size_t id) {
    SearchData& d = store_.data(id);
    d.on_stack = true;
    d.in_outer = true;
    stack_.push_back(id);
    frames.push_back({id, 0});
    ++stats_.outer_visits;
    trace_state("outer", id);
    check_deadlock(id);
  };
  enter(root);
  while (!frames.empty()) {
    const std::size_t id = frames.back().id;
    const std::vector<std::size_t>& succ = successor_ids(id);
    if (frames.back().next < succ.size()) {
      const std::size_t t = succ[frames.back().next++];
      const SearchData d = store_.data(t);
      if (!d.in_outer && !d.on_stack) {
        if (!covered(t)) {
          enter(t);
        } else {
          ++stats_.pruned;
          pruned_.push_back(t);
        }
      }
      continue;
    }
    if (a_.accepting[store_.state(id).location] && !covered(id)) inner_dfs(id);
    store_.data(id).on_stack = false;
    stack_.pop_back();
    frames.pop_back();
  }
}

void SymbolicExplorer::inner_dfs(std::size_t root) {
  struct Frame {
    std::size_t id;
    std::size_t next;
  };
  std::vector<Frame> frames;
  const auto enter = [&](std::size_t id) {
    store_.data(id).in_inner = true;
    frames.push_back({id, 0});
    ++stats_.inner_visits;
    trace_state("inner", id);
  };
  enter(root);
  while (!frames.empty()) {
    const std::size_t id = frames.back().id;
    const std::vector<std::size_t>& succ = successor_ids(id);
    if (frames.back().next >= succ.size()) {
      frames.pop_back();
      continue;
    }
    const std::size_t t = succ[frames.back().next++];
    if (store_.data(t).on_stack) {
      ++stats_.cycles;
      const ValuationSet& ext = store_.state(t).zone.c.extension();
      if (options_.check_cycles) {
        const auto at = std::find(stack_.begin(), stack_.end(), t);
        bool uniform = true;
        for (auto it = at; it != stack_.end(); ++it) {
          uniform = uniform && store_.state(*it).zone.c.extension() == ext;
        }
        for (const Frame& f : frames) {
          uniform = uniform && store_.state(f.id).zone.c.extension() == ext;
        }
        if (!uniform) ++stats_.cycle_violations;
      }
      const ValuationSet gained = ext.minus(found_);
      if (auto first = gained.first()) stats_.witnesses.push_back(a_.box->point(*first));
      found_ |= ext;
      // Returns from the current frame only.
      frames.pop_back();
      continue;
    }
    if (!store_.data(t).in_inner && !covered(t)) enter(t);
  }
}

void SymbolicExplorer::sweep_deadlocks() {
  std::vector<bool> seen(store_.size(), false);
  std::vector<std::size_t> work;
  for (const std::size_t id : pruned_) {
    if (!store_.data(id).in_outer && !seen[id]) {
      seen[id] = true;
      work.push_back(id);
    }
  }
  while (!work.empty()) {
    const std::size_t id = work.back();
    work.pop_back();
    ++stats_.swept_states;
    check_deadlock(id);
    for (const std::size_t t : successor_ids(id)) {
      if (seen.size() <= t) seen.resize(store_.size(), false);
      if (!seen[t] && !store_.data(t).in_outer) {
        seen[t] = true;
        work.push_back(t);
      }
    }
  }
}

ValuationSet SymbolicExplorer::cumulative_ndfs() {
  for (const Cpdbm& z : initial_zones()) {
    const std::size_t id = store_.intern(a_.initial, z);
    const SearchData d = store_.data(id);
    if (d.in_outer) continue;
    if (covered(id)) {
      ++stats_.pruned;
      pruned_.push_back(id);
      continue;
    }
    outer_dfs(id);
  }
  if (options_.deadlocks) sweep_deadlocks();
  stats_.stored_states = store_.size();
  stats_.representatives = store_.representatives();
  stats_.m1_buckets = store_.buckets();
  return found_;
}

std::uint64_t count_range_violations(const StateStore& store, const std::vector<std::int64_t>& max) {
  std::uint64_t bad = 0;
  for (std::size_t id = 0; id < store.size(); ++id) {
    const Cpdbm& z = store.state(id).zone;
    const ParamBox& box = z.c.box();
    const std::size_t n = z.d.dim();
    Valuation v(box.size());
    z.c.extension().for_each([&](std::size_t index) {
      box.decode(index, v);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          const StrictBound& b = z.d.at(i, j);
          if (i == j || b.infinite) continue;
          const std::int64_t value = b.expr.eval(v);
          if (value < -max[j] || value > max[i]) ++bad;
        }
      }
    });
  }
  return bad;
}

SynthesisResult synthesize(const Prepared& p, const ExploreOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  SymbolicExplorer ex(p.ptba, p.max, options);
  SynthesisResult r;
  r.accepted = ex.cumulative_ndfs();
  r.satisfying = r.accepted.complement();
  r.deadlock = ex.deadlock();
  r.stats = ex.stats().to_json(*p.box);
  if (options.check_range) r.stats["range_violations"] = count_range_violations(ex.store(), p.max);
  r.work = ex.stats().stored_states;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace ptasynth
