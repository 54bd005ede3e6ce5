// Acceptance checks. Usage: acceptance [N ...]; no argument runs all.
// Prints one line per criterion and exits nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "oracles/pdbm_fuzz.hpp"
#include "oracles/random_ltl.hpp"
#include "ptasynth/baseline.hpp"
#include "ptasynth/explore.hpp"
#include "support.hpp"

using namespace ptasynth;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(double seconds) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f s", seconds);
  return buf;
}

Prepared fixture(const std::string& model, const std::string& phi) {
  return prepare(parse_model(testing::fixture(model + ".pta")), ltl::parse(phi));
}

template <class Fn>
void each_pair(Fn&& fn) {
  for (const std::string& model : testing::fixture_models()) {
    for (const auto& [name, phi] : testing::properties(model)) fn(model, name, phi);
  }
}

ExploreOptions checked() {
  ExploreOptions o;
  o.check_monotonicity = true;
  o.check_cycles = true;
  return o;
}

Outcome oracle_equivalence() {
  const auto start = Clock::now();
  std::size_t pairs = 0;
  std::size_t models = 0;
  std::string bad;
  for (const std::string& model : testing::fixture_models()) {
    ++models;
    const auto props = testing::properties(model);
    if (props.size() < 3) bad += " " + model + "(fewer than 3 properties)";
    for (const auto& [name, phi] : props) {
      const Prepared p = fixture(model, phi);
      const SynthesisResult s = synthesize(p);
      const SynthesisResult e = enumerate(p);
      ++pairs;
      if (!(s.accepted == e.accepted && s.satisfying == e.satisfying && s.deadlock == e.deadlock)) {
        bad += " " + model + "/" + name;
      }
    }
  }
  const double t = since(start);
  const bool pass = bad.empty() && models >= 8 && t < 300;
  return {pass, std::to_string(models) + " models, " + std::to_string(pairs) + " pairs, " + fmt(t) +
                    (bad.empty() ? "" : ", mismatches:" + bad)};
}

BoxPtr box(std::vector<std::string> names, std::int64_t lo, std::int64_t hi) {
  const std::size_t n = names.size();
  return std::make_shared<const ParamBox>(std::move(names), std::vector<std::int64_t>(n, lo),
                                          std::vector<std::int64_t>(n, hi));
}

Outcome example_canonicalize() {
  const BoxPtr b = box({"p", "q"}, 0, 10);
  const AffineExpr p = AffineExpr::param(0);
  const AffineExpr q = AffineExpr::param(1);
  const std::size_t y = 1;
  const std::size_t x = 2;
  Pdbm d(3);  // x = y, both nonnegative
  d.at(x, 0) = StrictBound::le(p);
  d.at(y, 0) = StrictBound::le(q);
  const std::vector<Cpdbm> out = canonicalize(Cpdbm{ConstraintSet(b), d, false});
  if (out.size() != 2) return {false, std::to_string(out.size()) + " branches"};
  bool ok = out[0].c.constraints() == std::vector<Constraint>{Constraint::le(p, q)} &&
            out[1].c.constraints() == std::vector<Constraint>{Constraint::lt(q, p)};
  for (std::size_t k = 0; k < 2; ++k) {
    Pdbm expected(3);
    expected.at(x, 0) = StrictBound::le(k == 0 ? p : q);
    expected.at(y, 0) = StrictBound::le(k == 0 ? p : q);
    ok = ok && out[k].d == expected;
  }
  return {ok, "{p <= q}: x,y <= p; {q < p}: x,y <= q"};
}

Outcome example_extrapolate() {
  const BoxPtr b = box({"p"}, 0, 7);
  const AffineExpr p = AffineExpr::param(0);
  const std::size_t y = 2;
  Pdbm d(3);
  for (std::size_t i = 1; i < 3; ++i) d.at(i, 0) = StrictBound::infinity();
  d.at(y, 0) = StrictBound::le(p.scaled(2));
  const std::vector<Cpdbm> out = extrapolate_pk(Cpdbm{ConstraintSet(b), d, true}, {0, 10, 10});
  if (out.size() != 2) return {false, std::to_string(out.size()) + " branches"};
  const Constraint c1{p.scaled(2) - 10, false};
  const Constraint c2{AffineExpr(10) - p.scaled(2), true};
  Pdbm d2 = d;
  d2.at(y, 0) = StrictBound::infinity();
  bool ok = false;
  for (int order = 0; order < 2 && !ok; ++order) {
    const Cpdbm& first = out[order];
    const Cpdbm& second = out[1 - order];
    ok = first.c.constraints() == std::vector<Constraint>{c1} && first.d == d &&
         second.c.constraints() == std::vector<Constraint>{c2} && second.d == d2;
  }
  return {ok, "C1 = {2p <= 10} (6 valuations), C2 = {2p > 10} with y unbounded (2 valuations)"};
}

Outcome monotonicity() {
  std::uint64_t mono = 0;
  std::uint64_t cyc = 0;
  std::uint64_t cycles = 0;
  each_pair([&](const std::string& model, const std::string&, const std::string& phi) {
    const SynthesisResult r = synthesize(fixture(model, phi), checked());
    mono += r.stats["monotonicity_violations"].get<std::uint64_t>();
    cyc += r.stats["cycle_violations"].get<std::uint64_t>();
    cycles += r.stats["cycles"].get<std::uint64_t>();
  });
  return {mono == 0 && cyc == 0, std::to_string(mono) + " monotonicity and " + std::to_string(cyc) +
                                     " cycle violations over " + std::to_string(cycles) + " cycles"};
}

// Entries outside [-(n-1)*Mmax, (n-1)*Mmax]: a closed matrix built from
// entries in [-M, M] stays inside this wider band.
std::uint64_t outside_path_band(const StateStore& store, const std::vector<std::int64_t>& max) {
  const std::int64_t mmax = *std::max_element(max.begin(), max.end());
  std::uint64_t bad = 0;
  for (std::size_t id = 0; id < store.size(); ++id) {
    const Cpdbm& z = store.state(id).zone;
    const std::size_t n = z.d.dim();
    const std::int64_t band = static_cast<std::int64_t>(n - 1) * mmax;
    z.c.extension().for_each([&](std::size_t index) {
      const Valuation v = z.c.box().point(index);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          const StrictBound& b = z.d.at(i, j);
          if (i == j || b.infinite) continue;
          const std::int64_t value = b.expr.eval(v);
          if (value < -band || value > band) ++bad;
        }
      }
    });
  }
  return bad;
}

Outcome finiteness() {
  const std::uint64_t limit = Limits{}.max_states;
  std::uint64_t largest = 0;
  std::uint64_t violations = 0;
  std::uint64_t outside_band = 0;
  std::string worst;
  std::uint64_t worst_count = 0;
  bool terminated = true;
  each_pair([&](const std::string& model, const std::string& name, const std::string& phi) {
    try {
      const Prepared p = fixture(model, phi);
      SymbolicExplorer ex(p.ptba, p.max);
      ex.cumulative_ndfs();
      const std::uint64_t v = count_range_violations(ex.store(), p.max);
      largest = std::max<std::uint64_t>(largest, ex.store().size());
      violations += v;
      outside_band += outside_path_band(ex.store(), p.max);
      if (v > worst_count) {
        worst_count = v;
        worst = model + "/" + name;
      }
    } catch (const CapacityError&) {
      terminated = false;
    }
  });
  std::string detail = std::string(terminated ? "all explorations terminate" : "capacity exceeded") +
                       ", largest " + std::to_string(largest) + " of " + std::to_string(limit) +
                       " states, " + std::to_string(violations) + " stored bounds outside [-M(x_j), M(x_i)]";
  if (worst_count > 0) detail += " (most in " + worst + ")";
  detail += ", " + std::to_string(outside_band) + " outside +-(n-1)*max M";
  return {terminated && largest < limit && violations == 0, detail};
}

Outcome ltl_translation() {
  const auto start = Clock::now();
  oracle::RandomLtl gen(testing::seed());
  oracle::LtlReport report;
  while (report.pairs < 1000) oracle::check_random_pair(gen, report);
  const double t = since(start);
  return {report.failures == 0 && t < 30,
          std::to_string(report.pairs) + " pairs, " + std::to_string(report.failures) + " failures, " +
              fmt(t) + (report.first_failure.empty() ? "" : ", first: " + report.first_failure)};
}

Outcome pdbm_fuzz() {
  const auto start = Clock::now();
  oracle::PdbmFuzzer fuzzer(testing::seed());
  oracle::FuzzReport report;
  while (report.sequences < 10000) fuzzer.run_sequence(report);
  const double t = since(start);
  return {report.failures == 0 && t < 120,
          std::to_string(report.sequences) + " sequences, " + std::to_string(report.checks) + " checks, " +
              std::to_string(report.failures) + " failures, " + fmt(t) +
              (report.first_failure.empty() ? "" : ", first: " + report.first_failure)};
}

Outcome traingate_deadlock() {
  bool ok = true;
  std::ostringstream detail;
  for (const auto& [name, phi] : testing::properties("traingate")) {
    if (name != "prop1" && name != "prop2") continue;
    const Prepared p = fixture("traingate", phi);
    const SynthesisResult s = synthesize(p);
    const SynthesisResult e = enumerate(p);
    const bool here = s.accepted.is_subset_of(s.deadlock) && e.accepted.is_subset_of(e.deadlock);
    ok = ok && here;
    detail << name << ": " << s.accepted.count() << " violating, " << s.deadlock.count() << " deadlock of "
           << p.box->points() << "; ";
  }
  return {ok, detail.str() + "accepted within deadlock on both engines"};
}

Outcome work_ratio() {
  std::ostringstream detail;
  bool ok = true;
  for (const auto& [name, phi] : testing::properties("traingate")) {
    const Prepared p = fixture("traingate", phi);
    const SynthesisResult s = synthesize(p);
    const SynthesisResult e = enumerate(p);
    const double ratio = static_cast<double>(s.work) / static_cast<double>(e.work);
    ok = ok && ratio < 1;
    char buf[128];
    std::snprintf(buf, sizeof buf, "%s %llu/%llu = %.4f; ", name.c_str(),
                  static_cast<unsigned long long>(s.work), static_cast<unsigned long long>(e.work), ratio);
    detail << buf;
  }
  return {ok, detail.str() + "[0,8]^3"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"oracle equivalence", oracle_equivalence},
      {"canonicalization example", example_canonicalize},
      {"extrapolation example", example_extrapolate},
      {"monotonicity and cycle uniformity", monotonicity},
      {"finiteness and bound range", finiteness},
      {"LTL translation", ltl_translation},
      {"CPDBM fuzzing", pdbm_fuzz},
      {"TrainGate accepted within deadlock", traingate_deadlock},
      {"work ratio", work_ratio},
  };
  std::vector<std::size_t> selected;
  for (int k = 1; k < argc; ++k) selected.push_back(static_cast<std::size_t>(std::stoul(argv[k])));
  if (selected.empty()) {
    for (std::size_t k = 1; k <= criteria.size(); ++k) selected.push_back(k);
  }
  int failed = 0;
  for (const std::size_t k : selected) {
    if (k < 1 || k > criteria.size()) {
      std::cerr << "no criterion " << k << '\n';
      return 2;
    }
    Outcome o;
    try {
      o = criteria[k - 1].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << "criterion " << k << " " << (o.pass ? "PASS" : "FAIL") << " [" << criteria[k - 1].first
              << "] " << o.detail << std::endl;
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
