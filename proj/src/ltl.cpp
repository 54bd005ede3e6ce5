#include "ptasynth/ltl.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <sstream>

namespace ptasynth {

const char* cmp_symbol(Cmp c) {
  switch (c) {
    case Cmp::Lt: return "<";
    case Cmp::Le: return "<=";
    case Cmp::Eq: return "==";
    case Cmp::Ne: return "!=";
    case Cmp::Ge: return ">=";
    case Cmp::Gt: return ">";
  }
  return "?";
}

bool cmp_holds(Cmp c, std::int64_t lhs, std::int64_t rhs) {
  switch (c) {
    case Cmp::Lt: return lhs < rhs;
    case Cmp::Le: return lhs <= rhs;
    case Cmp::Eq: return lhs == rhs;
    case Cmp::Ne: return lhs != rhs;
    case Cmp::Ge: return lhs >= rhs;
    case Cmp::Gt: return lhs > rhs;
  }
  return false;
}

namespace ltl {

std::string Atom::to_string() const {
  std::string out = qualifier.empty() ? name : qualifier + "." + name;
  if (cmp) out += std::string(" ") + cmp_symbol(*cmp) + " " + std::to_string(value);
  return out;
}

FormulaPtr make_true() { return std::make_shared<const Formula>(Formula{Op::True, {}, {}, {}}); }
FormulaPtr make_false() { return std::make_shared<const Formula>(Formula{Op::False, {}, {}, {}}); }
FormulaPtr make_ap(Atom a) {
  return std::make_shared<const Formula>(Formula{Op::Ap, std::move(a), {}, {}});
}
FormulaPtr make_unary(Op op, FormulaPtr f) {
  return std::make_shared<const Formula>(Formula{op, {}, std::move(f), {}});
}
FormulaPtr make_binary(Op op, FormulaPtr l, FormulaPtr r) {
  return std::make_shared<const Formula>(Formula{op, {}, std::move(l), std::move(r)});
}

// ---------------------------------------------------------------------------
// Parser

namespace {

enum class Tok {
  End, Ident, Int, LParen, RParen, Not, And, Or, Implies, Next, Until, Release, Finally,
  Globally, True, False, Cmp
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::int64_t value = 0;
  Cmp cmp = Cmp::Eq;
  std::size_t pos = 0;
};

class LtlParser {
 public:
  explicit LtlParser(std::string_view text) : text_(text) { tokenize(); }

  FormulaPtr parse() {
    FormulaPtr f = implication();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'", peek().pos);
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& what, std::size_t pos) const {
    throw ParseError("LTL: " + what, 1, pos + 1);
  }

  void tokenize() {
    std::size_t i = 0;
    const auto push = [&](Tok k, std::size_t len) {
      Token t;
      t.kind = k;
      t.text = std::string(text_.substr(i, len));
      t.pos = i;
      tokens_.push_back(std::move(t));
      i += len;
    };
    while (i < text_.size()) {
      const char c = text_[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
        continue;
      }
      const std::string_view rest = text_.substr(i);
      const auto starts = [&](std::string_view s) { return rest.substr(0, s.size()) == s; };
      if (c == '(') {
        push(Tok::LParen, 1);
      } else if (c == ')') {
        push(Tok::RParen, 1);
      } else if (starts("&&")) {
        push(Tok::And, 2);
      } else if (starts("||")) {
        push(Tok::Or, 2);
      } else if (starts("->") || starts("=>")) {
        push(Tok::Implies, 2);
      } else if (starts("<=") || starts(">=") || starts("==") || starts("!=")) {
        push(Tok::Cmp, 2);
        Token& t = tokens_.back();
        t.cmp = t.text == "<=" ? Cmp::Le : t.text == ">=" ? Cmp::Ge : t.text == "==" ? Cmp::Eq : Cmp::Ne;
      } else if (c == '<' || c == '>') {
        push(Tok::Cmp, 1);
        tokens_.back().cmp = c == '<' ? Cmp::Lt : Cmp::Gt;
      } else if (c == '!') {
        push(Tok::Not, 1);
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '-' && i + 1 < text_.size() &&
                  std::isdigit(static_cast<unsigned char>(text_[i + 1])))) {
        std::size_t len = 1;
        while (i + len < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i + len]))) {
          ++len;
        }
        push(Tok::Int, len);
        try {
          tokens_.back().value = std::stoll(tokens_.back().text);
        } catch (const std::out_of_range&) {
          fail("integer out of range", tokens_.back().pos);
        }
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t len = 1;
        const auto ident_char = [&](char ch) {
          return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_';
        };
        while (i + len < text_.size() && ident_char(text_[i + len])) ++len;
        // One optional qualifier: Comp.name
        if (i + len + 1 < text_.size() && text_[i + len] == '.' &&
            (std::isalpha(static_cast<unsigned char>(text_[i + len + 1])) ||
             text_[i + len + 1] == '_')) {
          ++len;
          while (i + len < text_.size() && ident_char(text_[i + len])) ++len;
        }
        const std::string word(text_.substr(i, len));
        Tok kind = Tok::Ident;
        if (word == "G") kind = Tok::Globally;
        else if (word == "F") kind = Tok::Finally;
        else if (word == "X") kind = Tok::Next;
        else if (word == "U") kind = Tok::Until;
        else if (word == "R") kind = Tok::Release;
        else if (word == "and") kind = Tok::And;
        else if (word == "or") kind = Tok::Or;
        else if (word == "not") kind = Tok::Not;
        else if (word == "true") kind = Tok::True;
        else if (word == "false") kind = Tok::False;
        push(kind, len);
      } else {
        fail(std::string("unexpected character '") + c + "'", i);
      }
    }
    Token end;
    end.pos = text_.size();
    end.text = "end of input";
    tokens_.push_back(end);
  }

  const Token& peek() const { return tokens_[pos_]; }
  const Token& take() { return tokens_[pos_++]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }

  FormulaPtr implication() {
    FormulaPtr lhs = disjunction();
    if (accept(Tok::Implies)) return make_binary(Op::Implies, lhs, implication());
    return lhs;
  }

  FormulaPtr disjunction() {
    FormulaPtr lhs = conjunction();
    while (accept(Tok::Or)) lhs = make_binary(Op::Or, lhs, conjunction());
    return lhs;
  }

  FormulaPtr conjunction() {
    FormulaPtr lhs = temporal();
    while (accept(Tok::And)) lhs = make_binary(Op::And, lhs, temporal());
    return lhs;
  }

  FormulaPtr temporal() {
    FormulaPtr lhs = unary();
    if (accept(Tok::Until)) return make_binary(Op::Until, lhs, temporal());
    if (accept(Tok::Release)) return make_binary(Op::Release, lhs, temporal());
    return lhs;
  }

  FormulaPtr unary() {
    switch (peek().kind) {
      case Tok::Not: take(); return make_unary(Op::Not, unary());
      case Tok::Next: take(); return make_unary(Op::Next, unary());
      case Tok::Globally: take(); return make_unary(Op::Globally, unary());
      case Tok::Finally: take(); return make_unary(Op::Finally, unary());
      default: return primary();
    }
  }

  FormulaPtr primary() {
    const Token& t = take();
    switch (t.kind) {
      case Tok::LParen: {
        FormulaPtr f = implication();
        if (!accept(Tok::RParen)) fail("expected ')'", peek().pos);
        return f;
      }
      case Tok::True: return make_true();
      case Tok::False: return make_false();
      case Tok::Ident: {
        Atom a;
        const auto dot = t.text.find('.');
        if (dot == std::string::npos) {
          a.name = t.text;
        } else {
          a.qualifier = t.text.substr(0, dot);
          a.name = t.text.substr(dot + 1);
        }
        if (peek().kind == Tok::Cmp) {
          a.cmp = take().cmp;
          const Token& num = take();
          if (num.kind != Tok::Int) fail("expected integer after comparison", num.pos);
          a.value = num.value;
        }
        return make_ap(std::move(a));
      }
      default:
        fail("unexpected '" + t.text + "'", t.pos);
    }
  }

  std::string_view text_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

FormulaPtr parse(std::string_view text) { return LtlParser(text).parse(); }

std::string to_string(const FormulaPtr& f) {
  const auto unary = [&](const char* op) {
    const FormulaPtr& c = f->left;
    const bool bare = c->op == Op::Ap && !c->atom.cmp;
    const bool simple = c->op == Op::True || c->op == Op::False || bare;
    return std::string(op) + (simple ? to_string(c) : "(" + to_string(c) + ")");
  };
  const auto binary = [&](const char* op) {
    return "(" + to_string(f->left) + " " + op + " " + to_string(f->right) + ")";
  };
  switch (f->op) {
    case Op::True: return "true";
    case Op::False: return "false";
    case Op::Ap: return f->atom.to_string();
    case Op::Not: return unary("!");
    case Op::Next: return unary("X ");
    case Op::Finally: return unary("F ");
    case Op::Globally: return unary("G ");
    case Op::And: return binary("&&");
    case Op::Or: return binary("||");
    case Op::Implies: return binary("->");
    case Op::Until: return binary("U");
    case Op::Release: return binary("R");
  }
  return "?";
}

namespace {

FormulaPtr nnf(const FormulaPtr& f, bool neg) {
  switch (f->op) {
    case Op::True: return neg ? make_false() : make_true();
    case Op::False: return neg ? make_true() : make_false();
    case Op::Ap: return neg ? make_unary(Op::Not, f) : f;
    case Op::Not: return nnf(f->left, !neg);
    case Op::And:
      return make_binary(neg ? Op::Or : Op::And, nnf(f->left, neg), nnf(f->right, neg));
    case Op::Or:
      return make_binary(neg ? Op::And : Op::Or, nnf(f->left, neg), nnf(f->right, neg));
    case Op::Implies:
      return make_binary(neg ? Op::And : Op::Or, nnf(f->left, !neg), nnf(f->right, neg));
    case Op::Next: return make_unary(Op::Next, nnf(f->left, neg));
    case Op::Until:
      return make_binary(neg ? Op::Release : Op::Until, nnf(f->left, neg), nnf(f->right, neg));
    case Op::Release:
      return make_binary(neg ? Op::Until : Op::Release, nnf(f->left, neg), nnf(f->right, neg));
    case Op::Finally:
      return neg ? make_binary(Op::Release, make_false(), nnf(f->left, true))
                 : make_binary(Op::Until, make_true(), nnf(f->left, false));
    case Op::Globally:
      return neg ? make_binary(Op::Until, make_true(), nnf(f->left, true))
                 : make_binary(Op::Release, make_false(), nnf(f->left, false));
  }
  return f;
}

void collect_atoms(const FormulaPtr& f, std::set<Atom>& out) {
  if (!f) return;
  if (f->op == Op::Ap) out.insert(f->atom);
  collect_atoms(f->left, out);
  collect_atoms(f->right, out);
}

}  // namespace

FormulaPtr to_nnf(const FormulaPtr& f) { return nnf(f, false); }

std::vector<Atom> atoms(const FormulaPtr& f) {
  std::set<Atom> out;
  collect_atoms(f, out);
  return {out.begin(), out.end()};
}

// ---------------------------------------------------------------------------
// Tableau

namespace {

constexpr int kInit = -1;

struct Node {
  std::set<int> incoming;
  std::set<int> fresh;  // New
  std::set<int> old;
  std::set<int> next;
};

class Tableau {
 public:
  explicit Tableau(const FormulaPtr& f) {
    Node start;
    start.incoming.insert(kInit);
    start.fresh.insert(intern(f));
    expand(std::move(start));
  }

  const std::vector<Node>& nodes() const { return nodes_; }
  const FormulaPtr& formula(int id) const { return table_[static_cast<std::size_t>(id)]; }
  std::size_t formula_count() const { return table_.size(); }
  int id_of(const FormulaPtr& f) { return intern(f); }

 private:
  int intern(const FormulaPtr& f) {
    const std::string key = to_string(f);
    auto it = ids_.find(key);
    if (it != ids_.end()) return it->second;
    const int id = static_cast<int>(table_.size());
    table_.push_back(f);
    ids_.emplace(key, id);
    return id;
  }

  bool contradicts(const Node& n, const FormulaPtr& lit) {
    if (lit->op == Op::Ap) {
      auto it = ids_.find(to_string(make_unary(Op::Not, lit)));
      return it != ids_.end() && n.old.count(it->second) > 0;
    }
    auto it = ids_.find(to_string(lit->left));
    return it != ids_.end() && n.old.count(it->second) > 0;
  }

  void add_fresh(Node& n, const FormulaPtr& f) {
    const int id = intern(f);
    if (n.old.count(id) == 0) n.fresh.insert(id);
  }

  void expand(Node n) {
    if (n.fresh.empty()) {
      const auto [it, fresh] = by_content_.try_emplace({n.old, n.next}, nodes_.size());
      if (!fresh) {
        Node& existing = nodes_[it->second];
        existing.incoming.insert(n.incoming.begin(), n.incoming.end());
        return;
      }
      const int id = static_cast<int>(nodes_.size());
      Node succ;
      succ.incoming.insert(id);
      succ.fresh = n.next;
      nodes_.push_back(std::move(n));
      expand(std::move(succ));
      return;
    }
    const int eta_id = *n.fresh.begin();
    n.fresh.erase(n.fresh.begin());
    const FormulaPtr eta = formula(eta_id);
    if (n.old.count(eta_id) > 0) {
      expand(std::move(n));
      return;
    }
    switch (eta->op) {
      case Op::False:
        return;
      case Op::True:
      case Op::Ap:
      case Op::Not:
        if (eta->op != Op::True && contradicts(n, eta)) return;
        n.old.insert(eta_id);
        expand(std::move(n));
        return;
      case Op::And:
        n.old.insert(eta_id);
        add_fresh(n, eta->left);
        add_fresh(n, eta->right);
        expand(std::move(n));
        return;
      case Op::Or: {
        n.old.insert(eta_id);
        Node other = n;
        add_fresh(n, eta->left);
        add_fresh(other, eta->right);
        expand(std::move(n));
        expand(std::move(other));
        return;
      }
      case Op::Until: {
        n.old.insert(eta_id);
        Node other = n;
        add_fresh(n, eta->left);
        n.next.insert(eta_id);
        add_fresh(other, eta->right);
        expand(std::move(n));
        expand(std::move(other));
        return;
      }
      case Op::Release: {
        n.old.insert(eta_id);
        Node other = n;
        add_fresh(n, eta->right);
        n.next.insert(eta_id);
        add_fresh(other, eta->left);
        add_fresh(other, eta->right);
        expand(std::move(n));
        expand(std::move(other));
        return;
      }
      case Op::Next:
        n.old.insert(eta_id);
        n.next.insert(intern(eta->left));
        expand(std::move(n));
        return;
      case Op::Implies:
      case Op::Finally:
      case Op::Globally:
        throw std::logic_error("tableau: formula not in negation normal form");
    }
  }

  std::vector<FormulaPtr> table_;
  std::map<std::string, int> ids_;
  std::vector<Node> nodes_;
  std::map<std::pair<std::set<int>, std::set<int>>, std::size_t> by_content_;
};

using EdgeKey = std::pair<std::vector<Literal>, std::uint32_t>;

// Removes unreachable states and merges states with identical outgoing
// edges and acceptance, then renumbers in breadth-first order.
BuchiAutomaton simplify(BuchiAutomaton b) {
  for (bool changed = true; changed;) {
    changed = false;
    const std::size_t n = b.size();
    std::vector<std::vector<EdgeKey>> sig(n);
    for (const BaEdge& e : b.edges) sig[e.src].emplace_back(e.label, e.dst);
    for (auto& s : sig) {
      std::sort(s.begin(), s.end());
      s.erase(std::unique(s.begin(), s.end()), s.end());
    }
    bool initial_has_incoming = false;
    for (const BaEdge& e : b.edges) initial_has_incoming |= e.dst == b.initial;
    // Group by (signature, acceptance); a fresh initial state has no
    // incoming edges, so its own acceptance never matters.
    std::map<std::pair<std::vector<EdgeKey>, int>, std::uint32_t> keep;
    std::vector<std::uint32_t> target(n);
    for (std::uint32_t s = 0; s < n; ++s) target[s] = s;
    const bool free_initial = !initial_has_incoming;
    for (std::uint32_t s = 0; s < n; ++s) {
      if (free_initial && s == b.initial) continue;
      auto [it, fresh] = keep.try_emplace({sig[s], b.accepting[s] ? 1 : 0}, s);
      if (!fresh) {
        target[s] = it->second;
        changed = true;
      }
    }
    if (free_initial) {
      const auto a = keep.find({sig[b.initial], 1});
      const auto r = keep.find({sig[b.initial], 0});
      if (a != keep.end() && r == keep.end()) {
        b.accepting[b.initial] = true;
      } else if (r != keep.end() && a == keep.end()) {
        b.accepting[b.initial] = false;
      }
      const auto same = keep.find({sig[b.initial], b.accepting[b.initial] ? 1 : 0});
      if (same != keep.end()) {
        // The initial state absorbs its class.
        const std::uint32_t drop = same->second;
        for (std::uint32_t s = 0; s < n; ++s) {
          if (s == drop || target[s] == drop) target[s] = b.initial;
        }
        changed = true;
      }
    }
    if (changed) {
      std::vector<BaEdge> edges;
      for (BaEdge e : b.edges) {
        if (target[e.src] != e.src) continue;
        e.dst = target[e.dst];
        edges.push_back(std::move(e));
      }
      b.edges = std::move(edges);
    }
    // Renumber reachable states breadth-first.
    const auto out = b.outgoing();
    std::vector<std::int64_t> order(n, -1);
    std::deque<std::uint32_t> queue{b.initial};
    std::vector<std::uint32_t> visit;
    order[b.initial] = 0;
    while (!queue.empty()) {
      const std::uint32_t s = queue.front();
      queue.pop_front();
      visit.push_back(s);
      for (const std::uint32_t ei : out[s]) {
        const std::uint32_t d = b.edges[ei].dst;
        if (order[d] < 0) {
          order[d] = static_cast<std::int64_t>(visit.size() + queue.size());
          queue.push_back(d);
        }
      }
    }
    BuchiAutomaton r;
    r.atoms = b.atoms;
    r.initial = 0;
    r.accepting.assign(visit.size(), false);
    for (const std::uint32_t s : visit) r.accepting[static_cast<std::size_t>(order[s])] = b.accepting[s];
    std::set<std::tuple<std::uint32_t, std::vector<Literal>, std::uint32_t>> seen;
    for (const std::uint32_t s : visit) {
      for (const std::uint32_t ei : out[s]) {
        const BaEdge& e = b.edges[ei];
        BaEdge ne{static_cast<std::uint32_t>(order[s]), static_cast<std::uint32_t>(order[e.dst]),
                  e.label};
        if (seen.emplace(ne.src, ne.label, ne.dst).second) r.edges.push_back(std::move(ne));
      }
    }
    if (r.size() != n) changed = true;
    b = std::move(r);
  }
  return b;
}

}  // namespace

BuchiAutomaton to_buchi(const FormulaPtr& input) {
  const FormulaPtr f = to_nnf(input);
  BuchiAutomaton b;
  b.atoms = atoms(f);
  const auto ap_index = [&](const Atom& a) {
    return static_cast<std::uint32_t>(
        std::lower_bound(b.atoms.begin(), b.atoms.end(), a) - b.atoms.begin());
  };

  Tableau tab(f);
  const auto& nodes = tab.nodes();
  const std::size_t n = nodes.size();

  std::vector<std::vector<Literal>> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const int id : nodes[i].old) {
      const FormulaPtr& g = tab.formula(id);
      if (g->op == Op::Ap) labels[i].push_back({ap_index(g->atom), true});
      if (g->op == Op::Not) labels[i].push_back({ap_index(g->left->atom), false});
    }
    std::sort(labels[i].begin(), labels[i].end());
  }

  // Acceptance sets, one per until-formula occurring in some node.
  std::set<int> untils;
  for (const Node& node : nodes) {
    for (const int id : node.old) {
      if (tab.formula(id)->op == Op::Until) untils.insert(id);
    }
  }
  std::vector<std::vector<bool>> acc;
  for (const int u : untils) {
    const int rhs = tab.id_of(tab.formula(u)->right);
    std::vector<bool> set(n);
    for (std::size_t i = 0; i < n; ++i) {
      set[i] = nodes[i].old.count(u) == 0 || nodes[i].old.count(rhs) > 0;
    }
    acc.push_back(std::move(set));
  }
  if (acc.empty()) acc.emplace_back(n, true);
  const std::size_t k = acc.size();

  // State 0 is the fresh initial state; (node i, counter c) is 1 + i*k + c.
  const auto state = [&](std::size_t node, std::size_t c) {
    return static_cast<std::uint32_t>(1 + node * k + c);
  };
  b.initial = 0;
  b.accepting.assign(1 + n * k, false);
  for (std::size_t i = 0; i < n; ++i) b.accepting[state(i, 0)] = acc[0][i];

  for (std::size_t m = 0; m < n; ++m) {
    for (const int src : nodes[m].incoming) {
      if (src == kInit) continue;
      const auto s = static_cast<std::size_t>(src);
      for (std::size_t c = 0; c < k; ++c) {
        const std::size_t next_c = acc[c][s] ? (c + 1) % k : c;
        b.edges.push_back({state(s, c), state(m, next_c), labels[s]});
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (nodes[i].incoming.count(kInit) == 0) continue;
    for (std::size_t m = 0; m < n; ++m) {
      if (nodes[m].incoming.count(static_cast<int>(i)) > 0) {
        b.edges.push_back({0, state(m, 0), labels[i]});
      }
    }
  }
  return simplify(std::move(b));
}

std::vector<std::vector<std::uint32_t>> BuchiAutomaton::outgoing() const {
  std::vector<std::vector<std::uint32_t>> out(size());
  for (std::uint32_t e = 0; e < edges.size(); ++e) out[edges[e].src].push_back(e);
  return out;
}

bool BuchiAutomaton::enabled(const BaEdge& e, const std::vector<bool>& letter) {
  return std::all_of(e.label.begin(), e.label.end(),
                     [&](const Literal& l) { return letter[l.ap] == l.positive; });
}

std::string BuchiAutomaton::dump() const {
  std::ostringstream out;
  out << "states " << size() << "\ninitial " << initial << "\naccepting";
  for (std::size_t s = 0; s < size(); ++s) {
    if (accepting[s]) out << ' ' << s;
  }
  out << '\n';
  for (const BaEdge& e : edges) {
    out << e.src << " -- ";
    if (e.label.empty()) out << "true";
    for (std::size_t i = 0; i < e.label.size(); ++i) {
      if (i > 0) out << ',';
      out << (e.label[i].positive ? "" : "!") << atoms[e.label[i].ap].to_string();
    }
    out << " -> " << e.dst << (accepting[e.dst] ? " *" : "") << '\n';
  }
  return out.str();
}

std::vector<bool> letter_for(const BuchiAutomaton& b, const std::set<Atom>& letter) {
  std::vector<bool> out(b.atoms.size());
  for (std::size_t i = 0; i < b.atoms.size(); ++i) out[i] = letter.count(b.atoms[i]) > 0;
  return out;
}

bool lasso_accepts(const BuchiAutomaton& b, const Word& u, const Word& v) {
  if (v.empty()) throw DomainError("lasso_accepts: empty loop");
  const std::size_t positions = u.size() + v.size();
  std::vector<std::vector<bool>> letters;
  for (const auto& l : u) letters.push_back(letter_for(b, l));
  for (const auto& l : v) letters.push_back(letter_for(b, l));
  const auto next_pos = [&](std::size_t p) { return p + 1 == positions ? u.size() : p + 1; };
  const auto out = b.outgoing();
  const std::size_t total = b.size() * positions;
  std::vector<std::vector<std::size_t>> succ(total);
  for (std::size_t q = 0; q < b.size(); ++q) {
    for (std::size_t p = 0; p < positions; ++p) {
      for (const std::uint32_t ei : out[q]) {
        const BaEdge& e = b.edges[ei];
        if (BuchiAutomaton::enabled(e, letters[p])) {
          succ[q * positions + p].push_back(e.dst * positions + next_pos(p));
        }
      }
    }
  }
  const auto reach_from = [&](std::vector<std::size_t> frontier) {
    std::vector<bool> seen(total, false);
    for (const auto s : frontier) seen[s] = true;
    while (!frontier.empty()) {
      const std::size_t s = frontier.back();
      frontier.pop_back();
      for (const std::size_t t : succ[s]) {
        if (!seen[t]) {
          seen[t] = true;
          frontier.push_back(t);
        }
      }
    }
    return seen;
  };
  const auto reachable = reach_from({static_cast<std::size_t>(b.initial) * positions});
  for (std::size_t s = 0; s < total; ++s) {
    if (!reachable[s] || !b.accepting[s / positions]) continue;
    if (reach_from(succ[s])[s]) return true;
  }
  return false;
}

}  // namespace ltl
}  // namespace ptasynth
