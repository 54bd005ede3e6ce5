#include "ptasynth/baseline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <thread>
#include <unordered_map>

namespace ptasynth {

namespace {

ConcreteGuard instantiate_guard(const Guard& g, const Valuation& v) {
  ConcreteGuard out;
  for (const AtomicGuard& atom : g) {
    if (atom.bound.infinite) continue;
    out.push_back({atom.i, atom.j, dbm::bound(atom.bound.expr.eval(v), atom.bound.strict)});
  }
  return out;
}

bool apply(Dbm& z, const ConcreteGuard& g) {
  for (const ConcreteAtom& atom : g) {
    if (!z.constrain(atom.i, atom.j, atom.raw)) return false;
  }
  return true;
}

}  // namespace

TimedBuchi instantiate(const Ptba& a, const Valuation& v) {
  TimedBuchi t;
  t.dim = a.dim();
  t.initial = a.initial;
  t.accepting = a.accepting;
  for (const PtbaLocation& l : a.locations) {
    t.invariants.push_back(instantiate_guard(l.invariant, v));
    std::vector<ConcreteGuard> guards;
    for (const Guard& g : a.model_guards[l.model_location]) guards.push_back(instantiate_guard(g, v));
    t.model_guards.push_back(std::move(guards));
  }
  for (const PtaEdge& e : a.edges) {
    t.edges.push_back({e.src, e.dst, instantiate_guard(e.guard, v), e.resets});
  }
  t.outgoing = a.outgoing();
  return t;
}

// ---------------------------------------------------------------------------

bool ZoneGraph::finish(Dbm& z, std::size_t location) const {
  z.up();
  if (!apply(z, a_.invariants[location])) return false;
  z.extrapolate(max_);
  return z.close();
}

std::vector<ConcreteZoneState> ZoneGraph::initial() const {
  Dbm z = Dbm::zero(a_.dim);
  if (!finish(z, a_.initial)) return {};
  return {ConcreteZoneState{a_.initial, std::move(z)}};
}

std::vector<std::pair<std::size_t, ConcreteZoneState>> ZoneGraph::successors(
    const ConcreteZoneState& s) const {
  std::vector<std::pair<std::size_t, ConcreteZoneState>> out;
  for (const std::size_t ei : a_.outgoing[s.location]) {
    const TimedBuchiEdge& e = a_.edges[ei];
    Dbm z = s.zone;
    if (!apply(z, e.guard)) continue;
    for (const std::size_t c : e.resets) z.reset(c);
    if (!finish(z, e.dst)) continue;
    out.emplace_back(ei, ConcreteZoneState{e.dst, std::move(z)});
  }
  return out;
}

bool ZoneGraph::deadlocked(const ConcreteZoneState& s) const {
  const std::vector<ConcreteGuard>& guards = a_.model_guards[s.location];
  // Depth-first over the DNF of the negated disjunction of all guards.
  struct Frame {
    Dbm zone;
    std::size_t guard;
    std::size_t atom;
  };
  std::vector<Frame> frames{{s.zone, 0, 0}};
  while (!frames.empty()) {
    Frame& f = frames.back();
    if (f.guard == guards.size()) return true;
    const ConcreteGuard& g = guards[f.guard];
    if (f.atom == g.size()) {
      frames.pop_back();
      continue;
    }
    const ConcreteAtom& atom = g[f.atom++];
    Dbm z = f.zone;
    if (z.constrain(atom.j, atom.i, dbm::negate(atom.raw))) {
      const std::size_t next = f.guard + 1;
      frames.push_back({std::move(z), next, 0});
    }
  }
  return false;
}

// ---------------------------------------------------------------------------

ValuationCheck check_valuation(const TimedBuchi& a, const std::vector<std::int64_t>& max,
                               const BaselineOptions& options) {
  ZoneGraph graph(a, max);
  std::vector<ConcreteZoneState> states;
  std::vector<std::vector<std::size_t>> succ;
  std::unordered_map<std::size_t, std::vector<std::size_t>> index;
  const auto intern = [&](ConcreteZoneState s) {
    std::size_t h = s.zone.hash();
    hash_combine(h, s.location);
    std::vector<std::size_t>& bucket = index[h];
    for (const std::size_t id : bucket) {
      if (states[id] == s) return id;
    }
    const std::size_t id = states.size();
    if (id >= options.max_states) {
      throw CapacityError("zone graph exceeds " + std::to_string(options.max_states) + " states");
    }
    states.push_back(std::move(s));
    succ.emplace_back();
    bucket.push_back(id);
    return id;
  };

  ValuationCheck r;
  std::vector<std::size_t> roots;
  for (ConcreteZoneState& s : graph.initial()) roots.push_back(intern(std::move(s)));
  // Whole reachable graph first: the deadlock flag needs every state.
  for (std::size_t id = 0; id < states.size(); ++id) {
    if (!r.deadlock && graph.deadlocked(states[id])) r.deadlock = true;
    std::vector<std::size_t> ids;
    for (auto& [edge, t] : graph.successors(states[id])) {
      (void)edge;
      const std::size_t tid = intern(std::move(t));
      if (std::find(ids.begin(), ids.end(), tid) == ids.end()) ids.push_back(tid);
    }
    succ[id] = std::move(ids);
  }
  r.states = states.size();

  // Two-colour nested DFS.
  std::vector<char> blue(states.size(), 0), red(states.size(), 0), cyan(states.size(), 0);
  const auto inner = [&](std::size_t seed) {
    std::vector<std::pair<std::size_t, std::size_t>> stack{{seed, 0}};
    red[seed] = 1;
    while (!stack.empty()) {
      auto& [id, next] = stack.back();
      if (next == succ[id].size()) {
        stack.pop_back();
        continue;
      }
      const std::size_t t = succ[id][next++];
      if (cyan[t]) return true;
      if (!red[t]) {
        red[t] = 1;
        stack.emplace_back(t, 0);
      }
    }
    return false;
  };
  for (const std::size_t root : roots) {
    if (blue[root]) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
    blue[root] = cyan[root] = 1;
    while (!stack.empty()) {
      auto& [id, next] = stack.back();
      if (next < succ[id].size()) {
        const std::size_t t = succ[id][next++];
        if (!blue[t]) {
          blue[t] = cyan[t] = 1;
          stack.emplace_back(t, 0);
        }
        continue;
      }
      const std::size_t done = id;
      if (a.accepting[states[done].location] && inner(done)) {
        r.accepting = true;
        return r;
      }
      cyan[done] = 0;
      stack.pop_back();
    }
  }
  return r;
}

ValuationCheck check_valuation(const Ptba& a, const Valuation& v,
                               const std::vector<std::int64_t>& max,
                               const BaselineOptions& options) {
  return check_valuation(instantiate(a, v), max, options);
}

SynthesisResult enumerate(const Prepared& p, const BaselineOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const ParamBox& box = *p.box;
  const std::size_t n = box.points();
  std::vector<ValuationCheck> checks(n);

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  const auto worker = [&] {
    for (;;) {
      const std::size_t index = next++;
      if (index >= n) return;
      try {
        checks[index] = check_valuation(p.ptba, box.point(index), p.max, options);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next = n;
        return;
      }
    }
  };
  const unsigned threads = std::max(1U, std::min<unsigned>(options.threads, static_cast<unsigned>(n)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  SynthesisResult r;
  r.accepted = ValuationSet(p.box, false);
  r.deadlock = ValuationSet(p.box, false);
  std::uint64_t states = 0;
  std::uint64_t largest = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (checks[i].accepting) r.accepted.insert(i);
    if (checks[i].deadlock) r.deadlock.insert(i);
    states += checks[i].states;
    largest = std::max(largest, checks[i].states);
  }
  r.satisfying = r.accepted.complement();
  r.work = states;
  r.stats = nlohmann::ordered_json::object();
  r.stats["engine"] = "enumerate";
  r.stats["valuations"] = n;
  r.stats["zone_states"] = states;
  r.stats["max_zone_states"] = largest;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace ptasynth
