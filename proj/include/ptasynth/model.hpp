#pragma once

// Networks of parametric timed automata with handshake channels and bounded
// data variables, their composition into a single PTA, and the product with
// a Buchi automaton.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ptasynth/ltl.hpp"
#include "ptasynth/params.hpp"
#include "ptasynth/pdbm.hpp"

namespace ptasynth {

enum class Diagnostic {
  Syntax,
  UnknownIdentifier,
  NonSimpleGuard,
  UnboundedVariable,
  Duplicate,
  Invalid,
};

const char* diagnostic_name(Diagnostic d);

class ModelError : public ParseError {
 public:
  ModelError(Diagnostic kind, const std::string& what, std::size_t line, std::size_t column)
      : ParseError(std::string(diagnostic_name(kind)) + ": " + what, line, column), kind_(kind) {}
  Diagnostic kind() const { return kind_; }

 private:
  Diagnostic kind_;
};

/// Raised while composing a network, e.g. for a data update out of range.
class CompositionError : public Error {
 public:
  using Error::Error;
};

/// An LTL proposition that names nothing in the model.
class PropositionError : public Error {
 public:
  using Error::Error;
};

/// c0 + sum c_k * v_k over data variables.
struct DataExpr {
  std::int64_t constant = 0;
  std::vector<std::pair<std::size_t, std::int64_t>> terms;

  std::int64_t eval(const std::vector<std::int64_t>& vars) const;
  bool operator==(const DataExpr& other) const = default;
};

/// lhs <cmp> 0.
struct DataGuard {
  DataExpr lhs;
  Cmp cmp = Cmp::Le;
  bool holds(const std::vector<std::int64_t>& vars) const;
  bool operator==(const DataGuard& other) const = default;
};

struct Update {
  std::size_t var = 0;
  DataExpr value;
  bool operator==(const Update& other) const = default;
};

struct Sync {
  std::size_t channel = 0;
  bool send = true;
  bool operator==(const Sync& other) const = default;
};

struct Location {
  std::string name;
  Guard invariant;
  std::vector<std::string> labels;
};

struct Edge {
  std::size_t src = 0;
  std::size_t dst = 0;
  Guard guard;
  std::vector<DataGuard> data_guard;
  std::optional<Sync> sync;
  std::vector<std::size_t> resets;
  std::vector<Update> updates;
  std::size_t line = 0;
};

struct Component {
  std::string name;
  std::vector<Location> locations;
  std::size_t initial = 0;
  std::vector<Edge> edges;

  std::optional<std::size_t> find_location(std::string_view n) const;
};

struct DataVar {
  std::string name;
  std::int64_t lower = 0;
  std::int64_t upper = 0;
  std::int64_t initial = 0;
};

struct Network {
  BoxPtr box;
  /// Named integer constants, substituted while parsing.
  std::vector<std::pair<std::string, std::int64_t>> constants;
  /// Real clocks; clock index k in guards refers to clocks[k - 1].
  std::vector<std::string> clocks;
  std::vector<DataVar> vars;
  std::vector<std::string> channels;
  std::vector<Component> components;

  /// "0" followed by the clock names, indexable by guard clock index.
  std::vector<std::string> clock_names() const;
};

using BoundOverrides = std::map<std::string, std::pair<std::int64_t, std::int64_t>>;

Network parse_model(std::string_view text);
/// Replaces the bounds of declared parameters. Throws ModelError for names
/// that are not parameters and std::invalid_argument for empty ranges.
void apply_overrides(Network& net, const BoundOverrides& overrides,
                     std::uint64_t max_points = ParamBox::kDefaultMaxPoints);

/// Text that parses back to an equivalent network.
std::string dump_model(const Network& net);

std::string guard_to_string(const Guard& g, const std::vector<std::string>& clocks,
                            const std::vector<std::string>& params);

struct PtaLocation {
  std::string name;
  Guard invariant;
  std::vector<std::size_t> component_locations;
  std::vector<std::int64_t> data;
};

struct PtaEdge {
  std::size_t src = 0;
  std::size_t dst = 0;
  Guard guard;
  std::vector<std::size_t> resets;
};

struct Pta {
  BoxPtr box;
  std::vector<std::string> clocks;  // including "0"
  std::vector<PtaLocation> locations;
  std::size_t initial = 0;
  std::vector<PtaEdge> edges;
};

/// Discrete product of the components and data valuations, restricted to
/// the locations reachable when clocks are ignored.
Pta compose(const Network& net);

/// Truth of each proposition of `aps` at each location of `pta`.
using Labelling = std::vector<std::vector<bool>>;
Labelling label(const Network& net, const Pta& pta, const std::vector<ltl::Atom>& aps);

struct PtbaLocation {
  std::string name;
  Guard invariant;
  std::size_t model_location = 0;
  std::uint32_t ba_state = 0;
  int phase = 0;
};

struct Ptba {
  BoxPtr box;
  std::vector<std::string> clocks;
  std::vector<PtbaLocation> locations;
  std::size_t initial = 0;
  std::vector<PtaEdge> edges;
  std::vector<bool> accepting;
  /// Guards of the model's outgoing edges, per model location.
  std::vector<std::vector<Guard>> model_guards;

  std::vector<std::vector<std::size_t>> outgoing() const;
  std::size_t dim() const { return clocks.size(); }
};

Ptba product(const Pta& m, const Labelling& lab, const ltl::BuchiAutomaton& b);

/// Adds a clock z and requires z >= 1 between consecutive accepting visits.
Ptba make_nonzeno(const Ptba& a);

/// Largest constant each clock is compared with (index 0 is 0).
std::vector<std::int64_t> clock_maxima(const Ptba& a);

std::string dump_product(const Ptba& a);

}  // namespace ptasynth
