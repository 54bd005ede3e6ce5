#pragma once

// LTL formulas over named propositions and their translation to Buchi
// automata with literal-labelled transitions.

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ptasynth/params.hpp"

namespace ptasynth {

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(what + " at " + std::to_string(line) + ":" + std::to_string(column)),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

enum class Cmp { Lt, Le, Eq, Ne, Ge, Gt };

const char* cmp_symbol(Cmp c);
bool cmp_holds(Cmp c, std::int64_t lhs, std::int64_t rhs);

namespace ltl {

/// `name`, `Qualifier.name`, or `name <cmp> value` on a data variable.
struct Atom {
  std::string qualifier;
  std::string name;
  std::optional<Cmp> cmp;
  std::int64_t value = 0;

  std::string to_string() const;
  auto operator<=>(const Atom& other) const = default;
  bool operator==(const Atom& other) const = default;
};

enum class Op { True, False, Ap, Not, And, Or, Implies, Next, Until, Release, Finally, Globally };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  Op op = Op::True;
  Atom atom;
  FormulaPtr left;
  FormulaPtr right;
};

FormulaPtr make_true();
FormulaPtr make_false();
FormulaPtr make_ap(Atom a);
FormulaPtr make_unary(Op op, FormulaPtr f);
FormulaPtr make_binary(Op op, FormulaPtr l, FormulaPtr r);

/// Precedence, tightest first: ! X G F, then U R (right-assoc), &&, ||,
/// -> (right-assoc). Keywords `and`, `or`, `not`, `=>` are accepted too.
FormulaPtr parse(std::string_view text);

/// Fully parenthesized rendering, e.g. "G (!(a && b))".
std::string to_string(const FormulaPtr& f);

/// Negations only on propositions; F and G become U and R, -> is expanded.
FormulaPtr to_nnf(const FormulaPtr& f);

/// Every proposition occurring in f, sorted.
std::vector<Atom> atoms(const FormulaPtr& f);

struct Literal {
  std::uint32_t ap = 0;
  bool positive = true;
  auto operator<=>(const Literal& other) const = default;
  bool operator==(const Literal& other) const = default;
};

struct BaEdge {
  std::uint32_t src = 0;
  std::uint32_t dst = 0;
  /// Conjunction; empty means true.
  std::vector<Literal> label;
};

struct BuchiAutomaton {
  std::vector<Atom> atoms;
  std::uint32_t initial = 0;
  std::vector<bool> accepting;
  std::vector<BaEdge> edges;

  std::size_t size() const { return accepting.size(); }
  std::vector<std::vector<std::uint32_t>> outgoing() const;

  /// letter[k] is the truth value of atoms[k].
  static bool enabled(const BaEdge& e, const std::vector<bool>& letter);

  /// Text format: header lines, then one `src -- lit,lit -> dst` per edge.
  std::string dump() const;
};

/// Translation of an NNF formula (on-the-fly tableau, then counter
/// degeneralization and a little state merging).
BuchiAutomaton to_buchi(const FormulaPtr& nnf);

/// A finite word whose letters are sets of true propositions.
using Word = std::vector<std::set<Atom>>;

std::vector<bool> letter_for(const BuchiAutomaton& b, const std::set<Atom>& letter);

/// Whether b accepts u v^omega. v must be nonempty.
bool lasso_accepts(const BuchiAutomaton& b, const Word& u, const Word& v);

}  // namespace ltl
}  // namespace ptasynth
