#include "ptasynth/model.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <functional>
#include <set>
#include <sstream>

namespace ptasynth {

const char* diagnostic_name(Diagnostic d) {
  switch (d) {
    case Diagnostic::Syntax: return "syntax error";
    case Diagnostic::UnknownIdentifier: return "unknown identifier";
    case Diagnostic::NonSimpleGuard: return "non-simple guard";
    case Diagnostic::UnboundedVariable: return "unbounded data variable";
    case Diagnostic::Duplicate: return "duplicate declaration";
    case Diagnostic::Invalid: return "invalid model";
  }
  return "error";
}

std::int64_t DataExpr::eval(const std::vector<std::int64_t>& vars) const {
  std::int64_t value = constant;
  for (const auto& [v, c] : terms) value += c * vars[v];
  return value;
}

bool DataGuard::holds(const std::vector<std::int64_t>& vars) const {
  return cmp_holds(cmp, lhs.eval(vars), 0);
}

std::optional<std::size_t> Component::find_location(std::string_view n) const {
  for (std::size_t i = 0; i < locations.size(); ++i) {
    if (locations[i].name == n) return i;
  }
  return std::nullopt;
}

std::vector<std::string> Network::clock_names() const {
  std::vector<std::string> out{"0"};
  out.insert(out.end(), clocks.begin(), clocks.end());
  return out;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

enum class T { Ident, Int, Sym, Newline, End };

struct Tk {
  T kind = T::End;
  std::string text;
  std::int64_t value = 0;
  std::size_t line = 1;
  std::size_t col = 1;
};

std::vector<Tk> tokenize(std::string_view text) {
  std::vector<Tk> out;
  std::size_t line = 1;
  std::size_t line_start = 0;
  std::size_t i = 0;
  const auto col = [&](std::size_t at) { return at - line_start + 1; };
  while (i < text.size()) {
    const char c = text[i];
    if (c == '\n') {
      out.push_back({T::Newline, "newline", 0, line, col(i)});
      ++i;
      ++line;
      line_start = i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '#' || (c == '/' && i + 1 < text.size() && text[i + 1] == '/')) {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) {
        ++j;
      }
      out.push_back({T::Ident, std::string(text.substr(i, j - i)), 0, line, col(i)});
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      Tk t{T::Int, std::string(text.substr(i, j - i)), 0, line, col(i)};
      try {
        t.value = std::stoll(t.text);
      } catch (const std::out_of_range&) {
        throw ModelError(Diagnostic::Syntax, "integer out of range", line, col(i));
      }
      out.push_back(std::move(t));
      i = j;
      continue;
    }
    static const char* const kTwo[] = {"..", ":=", "->", "<=", ">=", "==", "!=", "&&"};
    bool matched = false;
    for (const char* sym : kTwo) {
      if (text.substr(i, 2) == sym) {
        out.push_back({T::Sym, sym, 0, line, col(i)});
        i += 2;
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::string_view("{}();,:+-*<>=!?").find(c) != std::string_view::npos) {
      out.push_back({T::Sym, std::string(1, c), 0, line, col(i)});
      ++i;
      continue;
    }
    throw ModelError(Diagnostic::Syntax, std::string("unexpected character '") + c + "'", line,
                     col(i));
  }
  out.push_back({T::End, "end of input", 0, line, col(i)});
  return out;
}

enum class Kind { Clock, Param, Const, Var, Chan };

// Linear combination read from a guard or update expression.
struct Lin {
  std::int64_t constant = 0;
  std::map<std::size_t, std::int64_t> clocks;
  std::map<std::size_t, std::int64_t> params;
  std::map<std::size_t, std::int64_t> vars;

  void add(const Lin& o, std::int64_t sign) {
    constant += sign * o.constant;
    const auto merge = [&](std::map<std::size_t, std::int64_t>& a,
                           const std::map<std::size_t, std::int64_t>& b) {
      for (const auto& [k, v] : b) {
        a[k] += sign * v;
        if (a[k] == 0) a.erase(k);
      }
    };
    merge(clocks, o.clocks);
    merge(params, o.params);
    merge(vars, o.vars);
  }
  void scale(std::int64_t f) {
    constant *= f;
    for (auto* m : {&clocks, &params, &vars}) {
      for (auto it = m->begin(); it != m->end();) {
        it->second *= f;
        it = it->second == 0 ? m->erase(it) : std::next(it);
      }
    }
  }
};

struct PendingEdge {
  std::string src;
  std::string dst;
  Edge edge;
  Tk at;
};

class ModelParser {
 public:
  explicit ModelParser(std::string_view text) : toks_(tokenize(text)) {}

  Network parse() {
    for (;;) {
      skip_separators();
      if (peek().kind == T::End) break;
      const Tk& t = peek();
      if (t.kind != T::Ident) fail(Diagnostic::Syntax, "expected a declaration", t);
      if (t.text == "param") {
        parse_param();
      } else if (t.text == "const") {
        parse_const();
      } else if (t.text == "clock") {
        parse_names(Kind::Clock);
      } else if (t.text == "chan") {
        parse_names(Kind::Chan);
      } else if (t.text == "var") {
        parse_var();
      } else if (t.text == "component") {
        parse_component();
      } else {
        fail(Diagnostic::Syntax, "unknown declaration '" + t.text + "'", t);
      }
    }
    if (net_.components.empty()) {
      fail(Diagnostic::Invalid, "model declares no component", peek());
    }
    net_.box = std::make_shared<const ParamBox>(param_names_, param_lo_, param_hi_);
    return std::move(net_);
  }

 private:
  [[noreturn]] void fail(Diagnostic d, const std::string& what, const Tk& at) const {
    throw ModelError(d, what, at.line, at.col);
  }

  const Tk& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Tk& take() {
    const Tk& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool is_sym(const char* s, std::size_t ahead = 0) const {
    return peek(ahead).kind == T::Sym && peek(ahead).text == s;
  }
  bool is_word(const char* s) const { return peek().kind == T::Ident && peek().text == s; }
  bool accept_sym(const char* s) {
    if (!is_sym(s)) return false;
    take();
    return true;
  }
  void expect_sym(const char* s) {
    if (!accept_sym(s)) fail(Diagnostic::Syntax, std::string("expected '") + s + "'", peek());
  }
  const Tk& expect_ident(const char* what) {
    if (peek().kind != T::Ident) fail(Diagnostic::Syntax, std::string("expected ") + what, peek());
    return take();
  }
  bool at_separator() const {
    return peek().kind == T::Newline || peek().kind == T::End || is_sym(";") || is_sym("}");
  }
  void end_statement() {
    if (!at_separator()) fail(Diagnostic::Syntax, "unexpected '" + peek().text + "'", peek());
  }
  void skip_separators() {
    while (peek().kind == T::Newline || is_sym(";")) take();
  }
  void skip_newlines() {
    while (peek().kind == T::Newline) take();
  }

  std::int64_t parse_int() {
    const bool neg = accept_sym("-");
    if (peek().kind != T::Int) fail(Diagnostic::Syntax, "expected an integer", peek());
    const std::int64_t v = take().value;
    return neg ? -v : v;
  }

  void declare(const Tk& name, Kind kind, std::size_t index) {
    if (symbols_.count(name.text) > 0 || name.text == "true" || name.text == "false") {
      fail(Diagnostic::Duplicate, "'" + name.text + "' is already declared", name);
    }
    symbols_.emplace(name.text, std::make_pair(kind, index));
  }

  void parse_param() {
    take();
    do {
      const Tk& name = expect_ident("a parameter name");
      expect_sym("=");
      const std::int64_t lo = parse_int();
      if (accept_sym("..")) {
        const std::int64_t hi = parse_int();
        if (lo > hi) fail(Diagnostic::Invalid, "empty range for parameter '" + name.text + "'", name);
        declare(name, Kind::Param, param_names_.size());
        param_names_.push_back(name.text);
        param_lo_.push_back(lo);
        param_hi_.push_back(hi);
      } else {
        declare(name, Kind::Const, net_.constants.size());
        net_.constants.emplace_back(name.text, lo);
      }
    } while (accept_sym(","));
    end_statement();
  }

  void parse_const() {
    take();
    do {
      const Tk& name = expect_ident("a constant name");
      expect_sym("=");
      declare(name, Kind::Const, net_.constants.size());
      net_.constants.emplace_back(name.text, parse_int());
    } while (accept_sym(","));
    end_statement();
  }

  void parse_names(Kind kind) {
    take();
    do {
      const Tk& name = expect_ident(kind == Kind::Clock ? "a clock name" : "a channel name");
      auto& list = kind == Kind::Clock ? net_.clocks : net_.channels;
      declare(name, kind, kind == Kind::Clock ? list.size() + 1 : list.size());
      list.push_back(name.text);
      accept_sym(",");
    } while (!at_separator());
    end_statement();
  }

  void parse_var() {
    take();
    do {
      const Tk& name = expect_ident("a variable name");
      if (!accept_sym(":")) {
        fail(Diagnostic::UnboundedVariable, "data variable '" + name.text + "' needs a range lo..hi",
             name);
      }
      DataVar v;
      v.name = name.text;
      v.lower = parse_int();
      if (!accept_sym("..")) {
        fail(Diagnostic::UnboundedVariable, "data variable '" + name.text + "' needs a range lo..hi",
             name);
      }
      v.upper = parse_int();
      if (v.lower > v.upper) fail(Diagnostic::Invalid, "empty range for '" + v.name + "'", name);
      v.initial = v.lower;
      if (accept_sym("=")) v.initial = parse_int();
      if (v.initial < v.lower || v.initial > v.upper) {
        fail(Diagnostic::Invalid, "initial value of '" + v.name + "' outside its range", name);
      }
      declare(name, Kind::Var, net_.vars.size());
      net_.vars.push_back(std::move(v));
    } while (accept_sym(","));
    end_statement();
  }

  // --- components -----------------------------------------------------------

  void parse_component() {
    take();
    Component comp;
    const Tk name = expect_ident("a component name");
    comp.name = name.text;
    for (const Component& other : net_.components) {
      if (other.name == comp.name) fail(Diagnostic::Duplicate, "component '" + comp.name + "'", name);
    }
    skip_newlines();
    expect_sym("{");
    std::optional<Tk> init;
    std::vector<PendingEdge> edges;
    for (;;) {
      skip_separators();
      if (accept_sym("}")) break;
      const Tk t = expect_ident("'location', 'init' or 'edge'");
      if (t.text == "location") {
        parse_location(comp);
      } else if (t.text == "init") {
        init = expect_ident("a location name");
        end_statement();
      } else if (t.text == "edge") {
        edges.push_back(parse_edge());
      } else {
        fail(Diagnostic::Syntax, "unexpected '" + t.text + "' in component", t);
      }
    }
    if (comp.locations.empty()) {
      fail(Diagnostic::Invalid, "component '" + comp.name + "' has no location", name);
    }
    if (init) {
      const auto idx = comp.find_location(init->text);
      if (!idx) fail(Diagnostic::UnknownIdentifier, "location '" + init->text + "'", *init);
      comp.initial = *idx;
    }
    for (PendingEdge& pe : edges) {
      const auto s = comp.find_location(pe.src);
      const auto d = comp.find_location(pe.dst);
      if (!s) fail(Diagnostic::UnknownIdentifier, "location '" + pe.src + "'", pe.at);
      if (!d) fail(Diagnostic::UnknownIdentifier, "location '" + pe.dst + "'", pe.at);
      pe.edge.src = *s;
      pe.edge.dst = *d;
      comp.edges.push_back(std::move(pe.edge));
    }
    net_.components.push_back(std::move(comp));
  }

  template <class Fn>
  void parse_clauses(Fn clause) {
    if (!is_sym("{")) return;
    take();
    for (;;) {
      skip_separators();
      if (accept_sym("}")) break;
      clause(expect_ident("a clause keyword"));
      end_statement();
    }
  }

  void parse_location(Component& comp) {
    const Tk name = expect_ident("a location name");
    if (comp.find_location(name.text)) {
      fail(Diagnostic::Duplicate, "location '" + name.text + "'", name);
    }
    Location loc;
    loc.name = name.text;
    parse_clauses([&](const Tk& kw) {
      if (kw.text == "invariant") {
        std::vector<DataGuard> data;
        Guard g = parse_guard(data);
        if (!data.empty()) fail(Diagnostic::Invalid, "data comparison in an invariant", kw);
        loc.invariant.insert(loc.invariant.end(), g.begin(), g.end());
      } else if (kw.text == "label") {
        do {
          loc.labels.push_back(expect_ident("a label").text);
          accept_sym(",");
        } while (!at_separator());
      } else {
        fail(Diagnostic::Syntax, "unknown location clause '" + kw.text + "'", kw);
      }
    });
    end_statement();
    comp.locations.push_back(std::move(loc));
  }

  PendingEdge parse_edge() {
    PendingEdge pe;
    pe.at = peek();
    pe.src = expect_ident("a source location").text;
    expect_sym("->");
    pe.dst = expect_ident("a target location").text;
    Edge& e = pe.edge;
    e.line = pe.at.line;
    parse_clauses([&](const Tk& kw) {
      if (kw.text == "guard") {
        Guard g = parse_guard(e.data_guard);
        e.guard.insert(e.guard.end(), g.begin(), g.end());
      } else if (kw.text == "sync") {
        const Tk ch = expect_ident("a channel");
        const auto it = symbols_.find(ch.text);
        if (it == symbols_.end() || it->second.first != Kind::Chan) {
          fail(Diagnostic::UnknownIdentifier, "channel '" + ch.text + "'", ch);
        }
        if (e.sync) fail(Diagnostic::Invalid, "edge has two sync clauses", kw);
        bool send = true;
        if (accept_sym("!")) {
          send = true;
        } else if (accept_sym("?")) {
          send = false;
        } else {
          fail(Diagnostic::Syntax, "expected '!' or '?' after channel", peek());
        }
        e.sync = Sync{it->second.second, send};
      } else if (kw.text == "reset") {
        do {
          const Tk c = expect_ident("a clock");
          const auto it = symbols_.find(c.text);
          if (it == symbols_.end() || it->second.first != Kind::Clock) {
            fail(Diagnostic::UnknownIdentifier, "clock '" + c.text + "'", c);
          }
          if (std::find(e.resets.begin(), e.resets.end(), it->second.second) == e.resets.end()) {
            e.resets.push_back(it->second.second);
          }
          accept_sym(",");
        } while (!at_separator());
      } else if (kw.text == "update") {
        do {
          const Tk v = expect_ident("a data variable");
          const auto it = symbols_.find(v.text);
          if (it == symbols_.end() || it->second.first != Kind::Var) {
            fail(Diagnostic::UnknownIdentifier, "data variable '" + v.text + "'", v);
          }
          expect_sym(":=");
          const Tk at = peek();
          const Lin lin = parse_lin();
          if (!lin.clocks.empty() || !lin.params.empty()) {
            fail(Diagnostic::Invalid, "updates may only use data variables and integers", at);
          }
          e.updates.push_back({it->second.second, to_data(lin)});
        } while (accept_sym(","));
      } else {
        fail(Diagnostic::Syntax, "unknown edge clause '" + kw.text + "'", kw);
      }
    });
    end_statement();
    return pe;
  }

  // --- expressions ---------------------------------------------------------

  Lin parse_term() {
    Lin out;
    const Tk t = peek();
    if (t.kind == T::Int) {
      take();
      if (accept_sym("*")) {
        out = parse_atom_ident();
        out.scale(t.value);
      } else {
        out.constant = t.value;
      }
      return out;
    }
    if (accept_sym("(")) {
      out = parse_lin();
      expect_sym(")");
      return out;
    }
    out = parse_atom_ident();
    if (accept_sym("*")) {
      if (peek().kind != T::Int) fail(Diagnostic::Syntax, "expected an integer factor", peek());
      out.scale(take().value);
    }
    return out;
  }

  Lin parse_atom_ident() {
    const Tk t = expect_ident("an identifier or integer");
    const auto it = symbols_.find(t.text);
    if (it == symbols_.end()) fail(Diagnostic::UnknownIdentifier, "'" + t.text + "'", t);
    Lin out;
    const auto [kind, index] = it->second;
    switch (kind) {
      case Kind::Clock: out.clocks[index] = 1; break;
      case Kind::Param: out.params[index] = 1; break;
      case Kind::Var: out.vars[index] = 1; break;
      case Kind::Const: out.constant = net_.constants[index].second; break;
      case Kind::Chan: fail(Diagnostic::Invalid, "channel '" + t.text + "' in an expression", t);
    }
    return out;
  }

  Lin parse_lin() {
    std::int64_t sign = 1;
    if (accept_sym("-")) sign = -1;
    Lin out;
    out.add(parse_term(), sign);
    for (;;) {
      if (accept_sym("+")) {
        out.add(parse_term(), 1);
      } else if (accept_sym("-")) {
        out.add(parse_term(), -1);
      } else {
        return out;
      }
    }
  }

  static DataExpr to_data(const Lin& lin) {
    DataExpr d;
    d.constant = lin.constant;
    for (const auto& [k, v] : lin.vars) d.terms.emplace_back(k, v);
    return d;
  }

  static AffineExpr to_affine(const Lin& lin) {
    AffineExpr e(lin.constant);
    for (const auto& [k, v] : lin.params) e = e + AffineExpr::param(static_cast<ParamIndex>(k), v);
    return e;
  }

  Guard parse_guard(std::vector<DataGuard>& data) {
    Guard out;
    do {
      if (is_word("true")) {
        take();
        continue;
      }
      const Tk at = peek();
      Lin lhs = parse_lin();
      if (peek().kind != T::Sym) fail(Diagnostic::Syntax, "expected a comparison", peek());
      const std::string op = take().text;
      Cmp cmp;
      if (op == "<") cmp = Cmp::Lt;
      else if (op == "<=") cmp = Cmp::Le;
      else if (op == "==") cmp = Cmp::Eq;
      else if (op == "!=") cmp = Cmp::Ne;
      else if (op == ">=") cmp = Cmp::Ge;
      else if (op == ">") cmp = Cmp::Gt;
      else fail(Diagnostic::Syntax, "expected a comparison, got '" + op + "'", at);
      lhs.add(parse_lin(), -1);  // lhs - rhs <cmp> 0
      add_atom(lhs, cmp, at, out, data);
    } while (accept_sym("&&") || (is_word("and") && (take(), true)));
    return out;
  }

  void add_atom(Lin lin, Cmp cmp, const Tk& at, Guard& out, std::vector<DataGuard>& data) {
    if (!lin.vars.empty()) {
      if (!lin.clocks.empty()) fail(Diagnostic::Invalid, "clock and data variable mixed", at);
      if (!lin.params.empty()) fail(Diagnostic::Invalid, "parameter in a data guard", at);
      data.push_back({to_data(lin), cmp});
      return;
    }
    if (lin.clocks.empty()) {
      fail(Diagnostic::Invalid, "constraint mentions no clock", at);
    }
    if (lin.clocks.size() > 1) {
      fail(Diagnostic::NonSimpleGuard,
           "a guard may compare only one clock with x0 (difference of two clocks)", at);
    }
    auto [clock, coeff] = *lin.clocks.begin();
    if (coeff != 1 && coeff != -1) {
      fail(Diagnostic::NonSimpleGuard, "clock coefficient must be 1 or -1", at);
    }
    if (cmp == Cmp::Ne) fail(Diagnostic::Invalid, "'!=' on a clock is not convex", at);
    lin.clocks.clear();
    // coeff*x + e <cmp> 0; normalize to x <cmp'> r.
    if (coeff == -1) {
      lin.scale(-1);
      switch (cmp) {
        case Cmp::Lt: cmp = Cmp::Gt; break;
        case Cmp::Le: cmp = Cmp::Ge; break;
        case Cmp::Ge: cmp = Cmp::Le; break;
        case Cmp::Gt: cmp = Cmp::Lt; break;
        default: break;
      }
    }
    const AffineExpr r = -to_affine(lin);
    const auto upper = [&](bool strict) {
      out.push_back({clock, 0, StrictBound{r, false, strict}});
    };
    const auto lower = [&](bool strict) {
      out.push_back({0, clock, StrictBound{-r, false, strict}});
    };
    switch (cmp) {
      case Cmp::Lt: upper(true); break;
      case Cmp::Le: upper(false); break;
      case Cmp::Gt: lower(true); break;
      case Cmp::Ge: lower(false); break;
      case Cmp::Eq:
        upper(false);
        lower(false);
        break;
      case Cmp::Ne: break;
    }
  }

  std::vector<Tk> toks_;
  std::size_t pos_ = 0;
  Network net_;
  std::map<std::string, std::pair<Kind, std::size_t>> symbols_;
  std::vector<std::string> param_names_;
  std::vector<std::int64_t> param_lo_;
  std::vector<std::int64_t> param_hi_;
};

}  // namespace

Network parse_model(std::string_view text) { return ModelParser(text).parse(); }

void apply_overrides(Network& net, const BoundOverrides& overrides, std::uint64_t max_points) {
  std::vector<std::string> names = net.box->names();
  std::vector<std::int64_t> lo;
  std::vector<std::int64_t> hi;
  for (std::size_t k = 0; k < names.size(); ++k) {
    lo.push_back(net.box->lower(static_cast<ParamIndex>(k)));
    hi.push_back(net.box->upper(static_cast<ParamIndex>(k)));
  }
  for (const auto& [name, range] : overrides) {
    const auto idx = net.box->find(name);
    if (!idx) {
      throw ModelError(Diagnostic::UnknownIdentifier, "'" + name + "' is not a declared parameter",
                       0, 0);
    }
    if (range.first > range.second) {
      throw std::invalid_argument("empty range for parameter '" + name + "'");
    }
    lo[*idx] = range.first;
    hi[*idx] = range.second;
  }
  net.box = std::make_shared<const ParamBox>(std::move(names), std::move(lo), std::move(hi),
                                             max_points);
}

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string data_expr_to_string(const DataExpr& d, const std::vector<DataVar>& vars) {
  AffineExpr shaped(d.constant);
  std::vector<std::string> names;
  for (const auto& v : vars) names.push_back(v.name);
  for (const auto& [k, c] : d.terms) shaped = shaped + AffineExpr::param(static_cast<ParamIndex>(k), c);
  return shaped.to_string(names);
}

std::string atom_to_string(const AtomicGuard& a, const std::vector<std::string>& clocks,
                           const std::vector<std::string>& params) {
  const char* rel = a.bound.strict ? "<" : "<=";
  if (a.j == 0) return clocks.at(a.i) + " " + rel + " " + a.bound.expr.to_string(params);
  if (a.i == 0) {
    return clocks.at(a.j) + " " + (a.bound.strict ? ">" : ">=") + " " +
           (-a.bound.expr).to_string(params);
  }
  return clocks.at(a.i) + " - " + clocks.at(a.j) + " " + rel + " " + a.bound.expr.to_string(params);
}

}  // namespace

std::string guard_to_string(const Guard& g, const std::vector<std::string>& clocks,
                            const std::vector<std::string>& params) {
  if (g.empty()) return "true";
  std::string out;
  for (const AtomicGuard& a : g) {
    if (!out.empty()) out += " && ";
    out += atom_to_string(a, clocks, params);
  }
  return out;
}

std::string dump_model(const Network& net) {
  std::ostringstream out;
  const auto& params = net.box->names();
  const auto clocks = net.clock_names();
  for (std::size_t k = 0; k < params.size(); ++k) {
    const auto p = static_cast<ParamIndex>(k);
    out << "param " << params[k] << " = " << net.box->lower(p) << ".." << net.box->upper(p) << '\n';
  }
  for (const auto& [name, value] : net.constants) out << "const " << name << " = " << value << '\n';
  if (!net.clocks.empty()) {
    out << "clock";
    for (const auto& c : net.clocks) out << ' ' << c;
    out << '\n';
  }
  for (const DataVar& v : net.vars) {
    out << "var " << v.name << " : " << v.lower << ".." << v.upper << " = " << v.initial << '\n';
  }
  if (!net.channels.empty()) {
    out << "chan";
    for (const auto& c : net.channels) out << ' ' << c;
    out << '\n';
  }
  for (const Component& comp : net.components) {
    out << "component " << comp.name << " {\n";
    for (const Location& loc : comp.locations) {
      out << "  location " << loc.name << " { invariant "
          << guard_to_string(loc.invariant, clocks, params);
      if (!loc.labels.empty()) {
        out << "; label";
        for (const auto& l : loc.labels) out << ' ' << l;
      }
      out << " }\n";
    }
    out << "  init " << comp.locations[comp.initial].name << '\n';
    for (const Edge& e : comp.edges) {
      out << "  edge " << comp.locations[e.src].name << " -> " << comp.locations[e.dst].name
          << " { guard " << guard_to_string(e.guard, clocks, params);
      for (const DataGuard& d : e.data_guard) {
        out << " && " << data_expr_to_string(d.lhs, net.vars) << ' ' << cmp_symbol(d.cmp) << " 0";
      }
      if (e.sync) out << "; sync " << net.channels[e.sync->channel] << (e.sync->send ? '!' : '?');
      if (!e.resets.empty()) {
        out << "; reset";
        for (const auto r : e.resets) out << ' ' << clocks[r];
      }
      for (std::size_t u = 0; u < e.updates.size(); ++u) {
        out << (u == 0 ? "; update " : ", ") << net.vars[e.updates[u].var].name
            << " := " << data_expr_to_string(e.updates[u].value, net.vars);
      }
      out << " }\n";
    }
    out << "}\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Composition

namespace {

std::string edge_name(const Network& net, std::size_t comp, const Edge& e) {
  const Component& c = net.components[comp];
  return c.name + ": " + c.locations[e.src].name + " -> " + c.locations[e.dst].name + " (line " +
         std::to_string(e.line) + ")";
}

void apply_updates(const Network& net, std::size_t comp, const Edge& e,
                   std::vector<std::int64_t>& data) {
  for (const Update& u : e.updates) {
    const std::int64_t value = u.value.eval(data);
    const DataVar& var = net.vars[u.var];
    if (value < var.lower || value > var.upper) {
      throw CompositionError("update " + var.name + " := " + std::to_string(value) +
                             " leaves the range " + std::to_string(var.lower) + ".." +
                             std::to_string(var.upper) + " on edge " + edge_name(net, comp, e));
    }
    data[u.var] = value;
  }
}

bool data_enabled(const Edge& e, const std::vector<std::int64_t>& data) {
  return std::all_of(e.data_guard.begin(), e.data_guard.end(),
                     [&](const DataGuard& g) { return g.holds(data); });
}

void append_unique(std::vector<std::size_t>& out, const std::vector<std::size_t>& in) {
  for (const auto c : in) {
    if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
  }
}

}  // namespace

Pta compose(const Network& net) {
  Pta pta;
  pta.box = net.box;
  pta.clocks = net.clock_names();

  using Key = std::pair<std::vector<std::size_t>, std::vector<std::int64_t>>;
  std::map<Key, std::size_t> index;
  std::deque<std::size_t> queue;

  const auto intern = [&](Key key) {
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    PtaLocation loc;
    for (std::size_t c = 0; c < net.components.size(); ++c) {
      const Location& l = net.components[c].locations[key.first[c]];
      loc.name += (c == 0 ? "" : ",") + l.name;
      loc.invariant.insert(loc.invariant.end(), l.invariant.begin(), l.invariant.end());
    }
    if (!net.vars.empty()) {
      loc.name += " [";
      for (std::size_t v = 0; v < net.vars.size(); ++v) {
        loc.name += (v == 0 ? "" : ",") + net.vars[v].name + "=" + std::to_string(key.second[v]);
      }
      loc.name += "]";
    }
    loc.component_locations = key.first;
    loc.data = key.second;
    const std::size_t id = pta.locations.size();
    pta.locations.push_back(std::move(loc));
    index.emplace(std::move(key), id);
    queue.push_back(id);
    return id;
  };

  Key init;
  for (const Component& c : net.components) init.first.push_back(c.initial);
  for (const DataVar& v : net.vars) init.second.push_back(v.initial);
  pta.initial = intern(std::move(init));

  while (!queue.empty()) {
    const std::size_t src = queue.front();
    queue.pop_front();
    const std::vector<std::size_t> locs = pta.locations[src].component_locations;
    const std::vector<std::int64_t> data = pta.locations[src].data;
    for (std::size_t i = 0; i < net.components.size(); ++i) {
      for (const Edge& e : net.components[i].edges) {
        if (e.src != locs[i] || !data_enabled(e, data)) continue;
        if (!e.sync) {
          Key next{locs, data};
          next.first[i] = e.dst;
          apply_updates(net, i, e, next.second);
          PtaEdge pe{src, 0, e.guard, e.resets};
          pe.dst = intern(std::move(next));
          pta.edges.push_back(std::move(pe));
          continue;
        }
        if (!e.sync->send) continue;
        for (std::size_t j = 0; j < net.components.size(); ++j) {
          if (j == i) continue;
          for (const Edge& f : net.components[j].edges) {
            if (f.src != locs[j] || !f.sync || f.sync->send || f.sync->channel != e.sync->channel ||
                !data_enabled(f, data)) {
              continue;
            }
            Key next{locs, data};
            next.first[i] = e.dst;
            next.first[j] = f.dst;
            apply_updates(net, i, e, next.second);
            apply_updates(net, j, f, next.second);
            PtaEdge pe{src, 0, e.guard, e.resets};
            pe.guard.insert(pe.guard.end(), f.guard.begin(), f.guard.end());
            append_unique(pe.resets, f.resets);
            pe.dst = intern(std::move(next));
            pta.edges.push_back(std::move(pe));
          }
        }
      }
    }
  }
  return pta;
}

Labelling label(const Network& net, const Pta& pta, const std::vector<ltl::Atom>& aps) {
  using Test = std::function<bool(const PtaLocation&)>;
  std::vector<Test> tests;
  for (const ltl::Atom& ap : aps) {
    const std::string shown = ap.to_string();
    if (ap.cmp) {
      if (!ap.qualifier.empty()) throw PropositionError("comparison on a qualified name: " + shown);
      std::optional<std::size_t> var;
      for (std::size_t v = 0; v < net.vars.size(); ++v) {
        if (net.vars[v].name == ap.name) var = v;
      }
      if (!var) throw PropositionError("unknown data variable in proposition '" + shown + "'");
      const Cmp cmp = *ap.cmp;
      const std::int64_t value = ap.value;
      const std::size_t vi = *var;
      tests.push_back([=](const PtaLocation& l) { return cmp_holds(cmp, l.data[vi], value); });
      continue;
    }
    // Per component: the set of local locations where the proposition holds.
    std::vector<std::vector<bool>> holds(net.components.size());
    bool known = false;
    for (std::size_t c = 0; c < net.components.size(); ++c) {
      const Component& comp = net.components[c];
      holds[c].assign(comp.locations.size(), false);
      if (!ap.qualifier.empty() && comp.name != ap.qualifier) continue;
      for (std::size_t l = 0; l < comp.locations.size(); ++l) {
        const Location& loc = comp.locations[l];
        const bool hit = loc.name == ap.name ||
                         std::find(loc.labels.begin(), loc.labels.end(), ap.name) != loc.labels.end();
        holds[c][l] = hit;
        known |= hit;
      }
    }
    if (!ap.qualifier.empty() &&
        std::none_of(net.components.begin(), net.components.end(),
                     [&](const Component& c) { return c.name == ap.qualifier; })) {
      throw PropositionError("unknown component in proposition '" + shown + "'");
    }
    if (!known) throw PropositionError("unknown proposition '" + shown + "'");
    tests.push_back([holds](const PtaLocation& l) {
      for (std::size_t c = 0; c < holds.size(); ++c) {
        if (holds[c][l.component_locations[c]]) return true;
      }
      return false;
    });
  }
  Labelling out(pta.locations.size(), std::vector<bool>(aps.size()));
  for (std::size_t l = 0; l < pta.locations.size(); ++l) {
    for (std::size_t k = 0; k < aps.size(); ++k) out[l][k] = tests[k](pta.locations[l]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Product and non-Zeno transformation

std::vector<std::vector<std::size_t>> Ptba::outgoing() const {
  std::vector<std::vector<std::size_t>> out(locations.size());
  for (std::size_t e = 0; e < edges.size(); ++e) out[edges[e].src].push_back(e);
  return out;
}

Ptba product(const Pta& m, const Labelling& lab, const ltl::BuchiAutomaton& b) {
  Ptba a;
  a.box = m.box;
  a.clocks = m.clocks;
  a.model_guards.resize(m.locations.size());
  std::vector<std::vector<std::size_t>> m_out(m.locations.size());
  for (std::size_t e = 0; e < m.edges.size(); ++e) {
    m_out[m.edges[e].src].push_back(e);
    a.model_guards[m.edges[e].src].push_back(m.edges[e].guard);
  }
  const auto b_out = b.outgoing();

  std::map<std::pair<std::size_t, std::uint32_t>, std::size_t> index;
  std::deque<std::size_t> queue;
  const auto intern = [&](std::size_t l, std::uint32_t q) {
    auto it = index.find({l, q});
    if (it != index.end()) return it->second;
    const std::size_t id = a.locations.size();
    a.locations.push_back({m.locations[l].name + " | q" + std::to_string(q),
                           m.locations[l].invariant, l, q, 0});
    a.accepting.push_back(b.accepting[q]);
    index.emplace(std::make_pair(l, q), id);
    queue.push_back(id);
    return id;
  };
  a.initial = intern(m.initial, b.initial);
  while (!queue.empty()) {
    const std::size_t src = queue.front();
    queue.pop_front();
    const std::size_t l = a.locations[src].model_location;
    const std::uint32_t q = a.locations[src].ba_state;
    for (const std::size_t me : m_out[l]) {
      const PtaEdge& edge = m.edges[me];
      for (const std::uint32_t be : b_out[q]) {
        if (!ltl::BuchiAutomaton::enabled(b.edges[be], lab[l])) continue;
        PtaEdge pe{src, 0, edge.guard, edge.resets};
        pe.dst = intern(edge.dst, b.edges[be].dst);
        a.edges.push_back(std::move(pe));
      }
    }
  }
  return a;
}

Ptba make_nonzeno(const Ptba& a) {
  Ptba out;
  out.box = a.box;
  out.clocks = a.clocks;
  std::string z = "z";
  while (std::find(out.clocks.begin(), out.clocks.end(), z) != out.clocks.end()) z += "'";
  out.clocks.push_back(z);
  const std::size_t zc = out.clocks.size() - 1;
  out.model_guards = a.model_guards;

  const auto a_out = a.outgoing();
  std::map<std::pair<std::size_t, int>, std::size_t> index;
  std::deque<std::size_t> queue;
  std::vector<std::size_t> origin;
  const auto intern = [&](std::size_t l, int phase) {
    auto it = index.find({l, phase});
    if (it != index.end()) return it->second;
    const std::size_t id = out.locations.size();
    PtbaLocation loc = a.locations[l];
    loc.phase = phase;
    if (phase == 1) loc.name += " *";
    out.locations.push_back(std::move(loc));
    out.accepting.push_back(phase == 1);
    origin.push_back(l);
    index.emplace(std::make_pair(l, phase), id);
    queue.push_back(id);
    return id;
  };
  out.initial = intern(a.initial, 0);
  while (!queue.empty()) {
    const std::size_t src = queue.front();
    queue.pop_front();
    const std::size_t l = origin[src];
    const int phase = out.locations[src].phase;
    for (const std::size_t ei : a_out[l]) {
      const PtaEdge& e = a.edges[ei];
      PtaEdge plain{src, 0, e.guard, e.resets};
      plain.dst = intern(e.dst, 0);
      out.edges.push_back(std::move(plain));
      if (phase == 0 && a.accepting[e.dst]) {
        PtaEdge timed{src, 0, e.guard, e.resets};
        timed.guard.push_back({0, zc, StrictBound::le(-1)});
        timed.resets.push_back(zc);
        timed.dst = intern(e.dst, 1);
        out.edges.push_back(std::move(timed));
      }
    }
  }
  return out;
}

std::vector<std::int64_t> clock_maxima(const Ptba& a) {
  std::vector<std::int64_t> max(a.dim(), 0);
  const auto scan = [&](const Guard& g) {
    for (const AtomicGuard& atom : g) {
      if (atom.bound.infinite) continue;
      const std::int64_t up = max_bound(atom.bound.expr, *a.box);
      const std::int64_t down = max_bound(-atom.bound.expr, *a.box);
      if (atom.i != 0) max[atom.i] = std::max(max[atom.i], atom.j == 0 ? up : std::max(up, down));
      if (atom.j != 0) max[atom.j] = std::max(max[atom.j], atom.i == 0 ? down : std::max(up, down));
    }
  };
  for (const auto& loc : a.locations) scan(loc.invariant);
  for (const auto& e : a.edges) scan(e.guard);
  for (const auto& guards : a.model_guards) {
    for (const Guard& g : guards) scan(g);
  }
  max[0] = 0;
  return max;
}

std::string dump_product(const Ptba& a) {
  std::ostringstream out;
  const auto& params = a.box->names();
  out << "clocks";
  for (std::size_t c = 1; c < a.clocks.size(); ++c) out << ' ' << a.clocks[c];
  out << "\nlocations " << a.locations.size() << "\ninitial " << a.initial << '\n';
  for (std::size_t l = 0; l < a.locations.size(); ++l) {
    out << l << ": " << a.locations[l].name << (a.accepting[l] ? " [accepting]" : "")
        << " inv " << guard_to_string(a.locations[l].invariant, a.clocks, params) << '\n';
  }
  for (const PtaEdge& e : a.edges) {
    out << e.src << " -> " << e.dst << " guard " << guard_to_string(e.guard, a.clocks, params);
    if (!e.resets.empty()) {
      out << " reset";
      for (const auto r : e.resets) out << ' ' << a.clocks[r];
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace ptasynth
