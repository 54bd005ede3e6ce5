#pragma once

#include <random>
#include <string>

#include "oracles/lasso_ltl.hpp"
#include "ptasynth/ltl.hpp"

namespace oracle {

class RandomLtl {
 public:
  explicit RandomLtl(std::uint64_t seed) : rng_(seed) {}

  ptasynth::ltl::FormulaPtr formula(int depth) {
    using namespace ptasynth::ltl;
    if (depth == 0 || rng_() % 4 == 0) {
      const auto r = rng_() % 8;
      if (r == 0) return make_true();
      if (r == 1) return make_false();
      return make_ap(atom(rng_() % 3));
    }
    static const Op unary[] = {Op::Not, Op::Next, Op::Finally, Op::Globally};
    static const Op binary[] = {Op::And, Op::Or, Op::Implies, Op::Until, Op::Release};
    if (rng_() % 2 == 0) return make_unary(unary[rng_() % 4], formula(depth - 1));
    return make_binary(binary[rng_() % 5], formula(depth - 1), formula(depth - 1));
  }

  ptasynth::ltl::Word word(std::size_t min_len, std::size_t max_len) {
    ptasynth::ltl::Word w(min_len + rng_() % (max_len - min_len + 1));
    for (auto& letter : w) {
      for (std::size_t k = 0; k < 3; ++k) {
        if (rng_() % 2 == 0) letter.insert(atom(k));
      }
    }
    return w;
  }

  static ptasynth::ltl::Atom atom(std::size_t k) {
    return ptasynth::ltl::Atom{"", std::string(1, static_cast<char>('a' + k)), std::nullopt, 0};
  }

 private:
  std::mt19937_64 rng_;
};

struct LtlReport {
  std::uint64_t pairs = 0;
  std::uint64_t failures = 0;
  std::string first_failure;
};

/// One random (formula, lasso) pair: translation agrees with direct
/// evaluation, and exactly one of f and !f is accepted.
inline void check_random_pair(RandomLtl& gen, LtlReport& report) {
  using namespace ptasynth::ltl;
  ++report.pairs;
  const FormulaPtr f = gen.formula(4);
  const Word u = gen.word(0, 6);
  const Word v = gen.word(1, 6);
  const bool expected = LassoEvaluator(u, v).holds(f);
  const bool pos = lasso_accepts(to_buchi(to_nnf(f)), u, v);
  const bool neg = lasso_accepts(to_buchi(to_nnf(make_unary(Op::Not, f))), u, v);
  if (pos != expected || pos == neg) {
    ++report.failures;
    if (report.first_failure.empty()) report.first_failure = to_string(f);
  }
}

}  // namespace oracle
