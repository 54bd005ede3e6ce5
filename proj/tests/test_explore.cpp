#include <doctest.h>

#include <algorithm>
#include <deque>
#include <set>

#include "ptasynth/baseline.hpp"
#include "ptasynth/explore.hpp"
#include "support.hpp"

using namespace ptasynth;

namespace {

Prepared prep(const std::string& model, const std::string& phi) {
  return prepare(parse_model(model), ltl::parse(phi));
}

Prepared fixture(const std::string& name, const std::string& phi) {
  return prep(testing::fixture(name + ".pta"), phi);
}

BoxPtr box1(std::int64_t hi) {
  return std::make_shared<const ParamBox>(std::vector<std::string>{"p"}, std::vector<std::int64_t>{0},
                                          std::vector<std::int64_t>{hi});
}

// A one-clock PTBA with a single location.
Ptba single(const BoxPtr& box, Guard inv, std::vector<Guard> self_loops, bool accepting) {
  Ptba a;
  a.box = box;
  a.clocks = {"0", "x"};
  a.locations.push_back({"l", std::move(inv), 0, 0, accepting ? 1 : 0});
  a.accepting = {accepting};
  a.model_guards.resize(1);
  for (Guard& g : self_loops) {
    a.model_guards[0].push_back(g);
    a.edges.push_back({0, 0, std::move(g), {}});
  }
  return a;
}

}  // namespace

TEST_CASE("store resolves semantically equal zones to one representative") {
  const BoxPtr box = box1(6);
  const AffineExpr p = AffineExpr::param(0);
  Pdbm d1(2);
  d1.at(1, 0) = StrictBound::le(p);
  Pdbm d2(2);
  d2.at(1, 0) = StrictBound::le(3);
  const ConstraintSet c1 = ConstraintSet(box).with(Constraint::le(p, AffineExpr(3))).with(
      Constraint::le(AffineExpr(3), p));
  const ConstraintSet c2 = ConstraintSet(box).with(Constraint{p - 3, false}).with(Constraint{-p + 3, false});
  const Cpdbm z1{c1, d1, true};
  const Cpdbm z2{c2, d2, true};
  CHECK(StateStore::signature(z1) == StateStore::signature(z2));
  CHECK(StateStore::same_semantics(z1, z2));

  StateStore store;
  bool inserted = false;
  const std::size_t a = store.intern(0, z1, &inserted);
  CHECK(inserted);
  const std::size_t b = store.intern(0, z2, &inserted);
  CHECK_FALSE(inserted);
  CHECK(a == b);
  CHECK(store.representatives() == 1);
  CHECK(store.intern(1, z2) != a);
  CHECK(store.representatives() == 1);

  SearchData data;
  data.in_outer = true;
  store.set_data(0, z2, data);
  CHECK(store.get_data(0, z1).in_outer);
  CHECK_FALSE(store.get_data(0, z1).in_inner);
  CHECK_FALSE(store.get_data(1, z1).in_outer);

  // Differs from z3 only at p = 0.
  const ConstraintSet wide = ConstraintSet(box).with(Constraint::le(p, AffineExpr(1)));
  Pdbm d3(2);
  d3.at(1, 0) = StrictBound::le(1);
  Pdbm d4(2);
  d4.at(1, 0) = StrictBound::le(p);
  const Cpdbm z3{wide, d3, true};
  const Cpdbm z4{wide, d4, true};
  CHECK_FALSE(StateStore::same_semantics(z3, z4));
  CHECK(store.intern(0, z3) != store.intern(0, z4));
  CHECK_FALSE(store.find(0, Cpdbm{ConstraintSet(box), d3, true}));
  CHECK(store.find(0, z3));
}

TEST_CASE("initial zones") {
  const BoxPtr box = box1(5);
  SUBCASE("no invariant") {
    const Ptba a = single(box, {}, {}, false);
    SymbolicExplorer ex(a, {0, 0});
    const auto zs = ex.initial_zones();
    REQUIRE(zs.size() == 1);
    CHECK(zs[0].d.at(1, 0).infinite);
    CHECK(zs[0].d.at(0, 1) == StrictBound::le(0));
  }
  SUBCASE("x <= p") {
    const Ptba a = single(box, {{1, 0, StrictBound::le(AffineExpr::param(0))}}, {}, false);
    SymbolicExplorer ex(a, {0, 5});
    const auto zs = ex.initial_zones();
    REQUIRE(zs.size() == 1);
    CHECK(zs[0].d.at(1, 0) == StrictBound::le(AffineExpr::param(0)));
    CHECK(zs[0].c.extension() == ValuationSet::full(box));
  }
}

TEST_CASE("successors") {
  const BoxPtr box = box1(3);
  SUBCASE("no edges") {
    const Ptba a = single(box, {}, {}, false);
    SymbolicExplorer ex(a, {0, 0});
    CHECK(ex.successors({0, ex.initial_zones()[0]}).empty());
  }
  SUBCASE("reset of every clock") {
    Ptba a;
    a.box = box;
    a.clocks = {"0", "x", "y"};
    a.locations.push_back({"l", {}, 0, 0, 0});
    a.accepting = {false};
    a.model_guards = {{Guard{}}};
    a.edges.push_back({0, 0, {}, {1, 2}});
    SymbolicExplorer ex(a, {0, 0, 0});
    Cpdbm start = ex.initial_zones()[0];
    const auto out = ex.successors({0, start});
    REQUIRE(out.size() == 1);
    const Pdbm& d = out[0].second.zone.d;
    CHECK(d.at(1, 2) == StrictBound::le(0));
    CHECK(d.at(2, 1) == StrictBound::le(0));
    CHECK(d.at(1, 0).infinite);
    CHECK(d.at(0, 1) == StrictBound::le(0));
  }
}

TEST_CASE("deadlock valuations") {
  const BoxPtr box = box1(5);
  const Guard x_le_p{{1, 0, StrictBound::le(AffineExpr::param(0))}};
  SUBCASE("no outgoing edges") {
    const Ptba a = single(box, {}, {}, false);
    SymbolicExplorer ex(a, {0, 0});
    CHECK(ex.deadlock_valuations({0, ex.initial_zones()[0]}) == ValuationSet::full(box));
  }
  SUBCASE("guard true") {
    const Ptba a = single(box, {}, {Guard{}}, false);
    SymbolicExplorer ex(a, {0, 0});
    CHECK(ex.deadlock_valuations({0, ex.initial_zones()[0]}).is_empty());
  }
  SUBCASE("x <= p on an up-closed zone") {
    const Ptba a = single(box, {}, {x_le_p}, false);
    SymbolicExplorer ex(a, {0, 5});
    CHECK(ex.deadlock_valuations({0, ex.initial_zones()[0]}) == ValuationSet::full(box));
  }
  SUBCASE("x <= p below an invariant x <= 2") {
    const Ptba a = single(box, {{1, 0, StrictBound::le(2)}}, {x_le_p}, false);
    SymbolicExplorer ex(a, {0, 5});
    const ValuationSet d = ex.deadlock_valuations({0, ex.initial_zones()[0]});
    CHECK(d.count() == 2);
    CHECK(d.contains(Valuation{0}));
    CHECK(d.contains(Valuation{1}));
  }
  SUBCASE("capacity") {
    std::vector<Guard> loops;
    for (int k = 0; k < 13; ++k) {
      loops.push_back({{1, 0, StrictBound::le(k)}, {0, 1, StrictBound::le(-k - 1)}});
    }
    const Ptba a = single(box, {}, loops, false);
    ExploreOptions o;
    o.limits.dnf_conjuncts = 4;
    SymbolicExplorer ex(a, {0, 20}, o);
    CHECK_THROWS_AS(ex.deadlock_valuations({0, ex.initial_zones()[0]}), CapacityError);
  }
}

TEST_CASE("cumulative NDFS on tiny graphs") {
  const BoxPtr box = box1(4);
  SUBCASE("accepting self-loop") {
    const Ptba a = single(box, {}, {Guard{}}, true);
    SymbolicExplorer ex(a, {0, 0});
    CHECK(ex.cumulative_ndfs() == ValuationSet::full(box));
    CHECK_FALSE(ex.stats().witnesses.empty());
  }
  SUBCASE("no accepting location") {
    const Ptba a = single(box, {}, {Guard{}}, false);
    SymbolicExplorer ex(a, {0, 0});
    CHECK(ex.cumulative_ndfs().is_empty());
  }
  SUBCASE("loop enabled only for small p") {
    const Ptba a = single(box, {{1, 0, StrictBound::le(AffineExpr::param(0))}},
                          {{{0, 1, StrictBound::le(-2)}, {1, 0, StrictBound::le(AffineExpr::param(0))}}},
                          true);
    SymbolicExplorer ex(a, {0, 4});
    const ValuationSet found = ex.cumulative_ndfs();
    CHECK(found.count() == 3);
    CHECK_FALSE(found.contains(Valuation{1}));
  }
}

TEST_CASE("synthesis of trivial properties") {
  const Prepared t = fixture("timer", "true");
  const SynthesisResult rt = synthesize(t);
  CHECK(rt.accepted.is_empty());
  CHECK(rt.satisfying == ValuationSet::full(t.box));

  const std::string loop = "param p = 0..3\nclock x\ncomponent C { location a\n"
                           " edge a -> a { guard x >= 1; reset x } }\n";
  const SynthesisResult rf = synthesize(prep(loop, "false"));
  CHECK(rf.accepted.count() == 4);
  CHECK(rf.satisfying.is_empty());
}

TEST_CASE("capacity limit on stored states") {
  const Prepared p = fixture("fischer", "G !(P1.cs && P2.cs)");
  ExploreOptions o;
  o.limits.max_states = 50;
  CHECK_THROWS_AS(synthesize(p, o), CapacityError);
}

TEST_CASE("pruning does not change the result") {
  for (const char* name : {"timer", "deadlock", "switch", "zeno", "alarm"}) {
    for (const auto& [prop, phi] : testing::properties(name)) {
      CAPTURE(name);
      CAPTURE(prop);
      const Prepared p = fixture(name, phi);
      ExploreOptions no_prune;
      no_prune.prune_found = false;
      const SynthesisResult a = synthesize(p);
      const SynthesisResult b = synthesize(p, no_prune);
      CHECK(a.accepted == b.accepted);
      CHECK(a.deadlock == b.deadlock);
    }
  }
}

TEST_CASE("result json is stable") {
  const Prepared p = fixture("deadlock", "G (D.s1 -> F goal)");
  const std::string first = to_json(synthesize(p)).dump();
  const std::string second = to_json(synthesize(p)).dump();
  CHECK(first == second);
  const auto doc = nlohmann::json::parse(first);
  CHECK(doc.contains("satisfying"));
  CHECK(doc.contains("violating"));
  CHECK(doc.contains("deadlock"));
  CHECK(doc["stats"].contains("m2_hits"));
  CHECK(doc["stats"]["splits"].contains("canonicalize"));
}

TEST_CASE("symbolic successors evaluate to the concrete zone graph") {
  for (const std::string& name : testing::fixture_models()) {
    CAPTURE(name);
    const std::string phi = testing::properties(name).at(1).second;
    const Prepared p = fixture(name, phi);
    SymbolicExplorer ex(p.ptba, p.max);
    std::vector<TimedBuchi> concrete;
    for (std::size_t i = 0; i < p.box->points(); ++i) concrete.push_back(instantiate(p.ptba, p.box->point(i)));

    using Key = std::pair<std::size_t, std::vector<raw_t>>;
    std::deque<SymbolicState> work;
    const auto initial = ex.initial_zones();
    for (std::size_t i = 0; i < p.box->points(); ++i) {
      const ZoneGraph g(concrete[i], p.max);
      std::set<std::vector<raw_t>> expected;
      for (const auto& s : g.initial()) expected.insert(s.zone.raw());
      std::set<std::vector<raw_t>> got;
      for (const Cpdbm& z : initial) {
        if (z.c.extension().contains(i)) got.insert(evaluate(z, p.box->point(i)).raw());
      }
      CHECK(got == expected);
    }
    for (const Cpdbm& z : initial) work.push_back({p.ptba.initial, z});
    std::size_t visited = 0;
    while (!work.empty() && visited < 150) {
      const SymbolicState s = work.front();
      work.pop_front();
      ++visited;
      const auto succ = ex.successors(s);
      s.zone.c.extension().for_each([&](std::size_t i) {
        const Valuation v = p.box->point(i);
        const ZoneGraph g(concrete[i], p.max);
        std::set<std::pair<std::size_t, Key>> expected;
        for (const auto& [e, t] : g.successors({s.location, evaluate(s.zone, v)})) {
          expected.insert({e, {t.location, t.zone.raw()}});
        }
        std::set<std::pair<std::size_t, Key>> got;
        for (const auto& [e, t] : succ) {
          if (t.zone.c.extension().contains(i)) got.insert({e, {t.location, evaluate(t.zone, v).raw()}});
        }
        CHECK(got == expected);
      });
      for (const auto& [e, t] : succ) work.push_back(t);
    }
  }
}
