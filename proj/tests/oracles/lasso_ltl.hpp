#pragma once

// Direct LTL semantics on an ultimately periodic word u v^omega.

#include <vector>

#include "ptasynth/ltl.hpp"

namespace oracle {

class LassoEvaluator {
 public:
  LassoEvaluator(const ptasynth::ltl::Word& u, const ptasynth::ltl::Word& v) : word_(u) {
    word_.insert(word_.end(), v.begin(), v.end());
    loop_ = u.size();
  }

  bool holds(const ptasynth::ltl::FormulaPtr& f) const { return eval(f)[0]; }

 private:
  std::size_t next(std::size_t i) const { return i + 1 < word_.size() ? i + 1 : loop_; }

  std::vector<bool> eval(const ptasynth::ltl::FormulaPtr& f) const {
    using ptasynth::ltl::Op;
    const std::size_t n = word_.size();
    std::vector<bool> out(n, false);
    switch (f->op) {
      case Op::True:
        out.assign(n, true);
        break;
      case Op::False:
        break;
      case Op::Ap:
        for (std::size_t i = 0; i < n; ++i) out[i] = word_[i].count(f->atom) > 0;
        break;
      case Op::Not: {
        const auto a = eval(f->left);
        for (std::size_t i = 0; i < n; ++i) out[i] = !a[i];
        break;
      }
      case Op::And:
      case Op::Or:
      case Op::Implies: {
        const auto a = eval(f->left);
        const auto b = eval(f->right);
        for (std::size_t i = 0; i < n; ++i) {
          out[i] = f->op == Op::And ? (a[i] && b[i]) : f->op == Op::Or ? (a[i] || b[i]) : (!a[i] || b[i]);
        }
        break;
      }
      case Op::Next: {
        const auto a = eval(f->left);
        for (std::size_t i = 0; i < n; ++i) out[i] = a[next(i)];
        break;
      }
      case Op::Finally:
      case Op::Until: {
        const auto a = f->op == Op::Until ? eval(f->left) : std::vector<bool>(n, true);
        const auto b = eval(f->op == Op::Until ? f->right : f->left);
        // least fixpoint of b || (a && X out)
        for (std::size_t round = 0; round <= n; ++round) {
          for (std::size_t i = n; i-- > 0;) out[i] = b[i] || (a[i] && out[next(i)]);
        }
        break;
      }
      case Op::Globally:
      case Op::Release: {
        const auto a = f->op == Op::Release ? eval(f->left) : std::vector<bool>(n, false);
        const auto b = eval(f->op == Op::Release ? f->right : f->left);
        // greatest fixpoint of b && (a || X out)
        out.assign(n, true);
        for (std::size_t round = 0; round <= n; ++round) {
          for (std::size_t i = n; i-- > 0;) out[i] = b[i] && (a[i] || out[next(i)]);
        }
        break;
      }
    }
    return out;
  }

  ptasynth::ltl::Word word_;
  std::size_t loop_ = 0;
};

}  // namespace oracle
