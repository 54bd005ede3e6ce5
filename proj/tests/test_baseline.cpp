#include <doctest.h>

#include <random>

#include "oracles/region_graph.hpp"
#include "ptasynth/baseline.hpp"
#include "support.hpp"

using namespace ptasynth;

namespace {

Prepared fixture(const std::string& name, const std::string& phi) {
  return prepare(parse_model(testing::fixture(name + ".pta")), ltl::parse(phi));
}

TimedBuchi one_location(bool accepting, bool loop) {
  TimedBuchi t;
  t.dim = 2;
  t.invariants = {{}};
  t.accepting = {accepting};
  t.model_guards = {{}};
  t.outgoing = {{}};
  if (loop) {
    t.edges.push_back({0, 0, {{0, 1, dbm::le(-1)}}, {1}});
    t.outgoing[0].push_back(0);
    t.model_guards[0].push_back(t.edges[0].guard);
  }
  return t;
}

// One clock, up to three locations, constants up to 3.
TimedBuchi random_micro(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, 99);
  std::uniform_int_distribution<std::int64_t> constant(0, 3);
  TimedBuchi t;
  t.dim = 2;
  const std::size_t n = 1 + static_cast<std::size_t>(pick(rng) % 3);
  t.invariants.resize(n);
  t.model_guards.resize(n);
  t.outgoing.resize(n);
  for (std::size_t l = 0; l < n; ++l) {
    t.accepting.push_back(pick(rng) < 40);
    if (pick(rng) < 40) t.invariants[l].push_back({1, 0, dbm::bound(constant(rng), pick(rng) < 30)});
  }
  const std::size_t edges = static_cast<std::size_t>(pick(rng) % 5);
  for (std::size_t k = 0; k < edges; ++k) {
    TimedBuchiEdge e;
    e.src = static_cast<std::size_t>(pick(rng)) % n;
    e.dst = static_cast<std::size_t>(pick(rng)) % n;
    const int atoms = pick(rng) % 3;
    for (int a = 0; a < atoms; ++a) {
      const bool strict = pick(rng) < 30;
      if (pick(rng) < 50) {
        e.guard.push_back({1, 0, dbm::bound(constant(rng), strict)});
      } else {
        e.guard.push_back({0, 1, dbm::bound(-constant(rng), strict)});
      }
    }
    if (pick(rng) < 50) e.resets.push_back(1);
    t.model_guards[e.src].push_back(e.guard);
    t.outgoing[e.src].push_back(t.edges.size());
    t.edges.push_back(std::move(e));
  }
  return t;
}

}  // namespace

TEST_CASE("instantiate evaluates parametric bounds") {
  const std::string text = "param p = 0..5\nclock x\ncomponent C { location a\n"
                           " edge a -> a { guard x <= 2*p - 1 } }\n";
  const Prepared p = prepare(parse_model(text), ltl::parse("false"));
  const TimedBuchi t = instantiate(p.ptba, Valuation{3});
  bool seen = false;
  for (const TimedBuchiEdge& e : t.edges) {
    for (const ConcreteAtom& a : e.guard) {
      if (a.i == 1 && a.j == 0) {
        CHECK(a.raw == dbm::le(5));
        seen = true;
      }
    }
  }
  CHECK(seen);
}

TEST_CASE("check_valuation on single locations") {
  const std::vector<std::int64_t> max{0, 1};
  CHECK_FALSE(check_valuation(one_location(false, true), max).accepting);
  CHECK(check_valuation(one_location(true, true), max).accepting);
  const ValuationCheck stuck = check_valuation(one_location(true, false), max);
  CHECK_FALSE(stuck.accepting);
  CHECK(stuck.deadlock);
  CHECK(stuck.states == 1);
}

TEST_CASE("check_valuation agrees with the region graph") {
  std::mt19937_64 rng(testing::seed());
  const std::vector<std::int64_t> max{0, 3};
  int accepting = 0;
  for (int k = 0; k < 400; ++k) {
    const TimedBuchi t = random_micro(rng);
    const ValuationCheck z = check_valuation(t, max);
    const auto r = oracle::RegionGraph(t, max).check();
    CAPTURE(k);
    CHECK(z.accepting == r.accepting);
    CHECK(z.deadlock == r.deadlock);
    CHECK(z.states <= r.states);
    accepting += z.accepting ? 1 : 0;
  }
  CHECK(accepting > 20);
}

TEST_CASE("zero-time loops do not count as lassos") {
  const Prepared p = fixture("zeno", "G good");
  const SynthesisResult r = enumerate(p);
  CHECK(r.accepted.count() == 4);
  CHECK_FALSE(r.accepted.contains(Valuation{0}));
  CHECK_FALSE(r.accepted.contains(Valuation{1}));
  CHECK(r.accepted == synthesize(p).accepted);
}

TEST_CASE("enumerate on a single valuation") {
  Network net = parse_model(testing::fixture("timer.pta"));
  apply_overrides(net, {{"lo", {3, 3}}, {"hi", {2, 2}}});
  const Prepared p = prepare(net, ltl::parse("G (ready -> F fin)"));
  REQUIRE(p.box->points() == 1);
  const SynthesisResult r = enumerate(p);
  const ValuationCheck c = check_valuation(p.ptba, p.box->point(0), p.max);
  CHECK(r.accepted.contains(0) == c.accepting);
  CHECK(r.deadlock.contains(0) == c.deadlock);
  CHECK(r.work == c.states);
  CHECK_FALSE(c.accepting);
  CHECK(c.deadlock);
}

TEST_CASE("enumerate is independent of thread count") {
  const Prepared p = fixture("fischer", "G (P1.req -> F P1.cs)");
  BaselineOptions many;
  many.threads = 4;
  const SynthesisResult a = enumerate(p);
  const SynthesisResult b = enumerate(p, many);
  CHECK(a.accepted == b.accepted);
  CHECK(a.deadlock == b.deadlock);
  CHECK(a.work == b.work);
  CHECK(check_valuation(p.ptba, p.box->point(3), p.max).states ==
        check_valuation(p.ptba, p.box->point(3), p.max).states);
}

TEST_CASE("capacity limit per valuation") {
  const Prepared p = fixture("fischer", "G !(P1.cs && P2.cs)");
  BaselineOptions o;
  o.max_states = 5;
  CHECK_THROWS_AS(enumerate(p, o), CapacityError);
}
