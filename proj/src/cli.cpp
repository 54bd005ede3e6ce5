#include "ptasynth/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ptasynth/baseline.hpp"
#include "ptasynth/explore.hpp"
#include "ptasynth/ltl.hpp"
#include "ptasynth/model.hpp"

namespace ptasynth::cli {

namespace {

struct RunConfig {
  std::string model;
  std::string ltl;
  std::string engine = "symbolic";
  std::vector<std::string> params;
  std::string out;
  bool stats = false;
  bool trace = false;
  bool dump_ba = false;
  bool dump_product = false;
  bool no_prune = false;
  std::uint64_t limit_states = Limits{}.max_states;
  std::uint64_t limit_points = ParamBox::kDefaultMaxPoints;
  std::size_t limit_dnf = Limits{}.dnf_conjuncts;
  unsigned threads = 1;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

BoundOverrides parse_overrides(const std::vector<std::string>& specs) {
  BoundOverrides out;
  for (const std::string& spec : specs) {
    const auto eq = spec.find('=');
    const auto dots = spec.find("..", eq == std::string::npos ? 0 : eq);
    if (eq == std::string::npos || dots == std::string::npos) {
      throw UsageError("--param expects NAME=LO..HI, got '" + spec + "'");
    }
    try {
      std::size_t used_lo = 0;
      std::size_t used_hi = 0;
      const std::string lo_text = spec.substr(eq + 1, dots - eq - 1);
      const std::string hi_text = spec.substr(dots + 2);
      const std::int64_t lo = std::stoll(lo_text, &used_lo);
      const std::int64_t hi = std::stoll(hi_text, &used_hi);
      if (used_lo != lo_text.size() || used_hi != hi_text.size()) throw std::invalid_argument(spec);
      out[spec.substr(0, eq)] = {lo, hi};
    } catch (const std::logic_error&) {
      throw UsageError("--param expects NAME=LO..HI, got '" + spec + "'");
    }
  }
  return out;
}

Network load_network(const RunConfig& cfg) {
  if (cfg.model.empty()) throw UsageError("--model is required");
  Network net = parse_model(read_file(cfg.model));
  apply_overrides(net, parse_overrides(cfg.params), cfg.limit_points);
  return net;
}

ltl::FormulaPtr load_property(const RunConfig& cfg) {
  if (cfg.ltl.empty()) throw UsageError("--ltl is required");
  return ltl::parse(cfg.ltl);
}

ExploreOptions explore_options(const RunConfig& cfg, std::ostream& err) {
  ExploreOptions o;
  o.limits.max_states = cfg.limit_states;
  o.limits.dnf_conjuncts = cfg.limit_dnf;
  o.prune_found = !cfg.no_prune;
  if (cfg.trace) o.trace = &err;
  return o;
}

BaselineOptions baseline_options(const RunConfig& cfg) {
  BaselineOptions o;
  o.max_states = cfg.limit_states;
  o.threads = cfg.threads;
  return o;
}

nlohmann::ordered_json result_document(const Prepared& p, const SynthesisResult& r,
                                       const std::string& engine) {
  nlohmann::ordered_json doc;
  doc["engine"] = engine;
  doc["parameters"] = nlohmann::ordered_json::object();
  for (std::size_t k = 0; k < p.box->size(); ++k) {
    const auto idx = static_cast<ParamIndex>(k);
    doc["parameters"][p.box->name(idx)] = {p.box->lower(idx), p.box->upper(idx)};
  }
  doc["property"] = ltl::to_string(p.property);
  const nlohmann::ordered_json body = to_json(r);
  for (const auto& [key, value] : body.items()) doc[key] = value;
  return doc;
}

void write_document(const RunConfig& cfg, const nlohmann::ordered_json& doc, std::ostream& out) {
  if (cfg.out.empty()) {
    out << doc.dump(2) << '\n';
    return;
  }
  std::ofstream file(cfg.out, std::ios::binary);
  if (!file) throw UsageError("cannot write '" + cfg.out + "'");
  file << doc.dump(2) << '\n';
}

nlohmann::ordered_json timing(const SynthesisResult& r) {
  nlohmann::ordered_json j = r.stats;
  j["seconds"] = r.seconds;
  j["work"] = r.work;
  return j;
}

void print_dumps(const RunConfig& cfg, const Prepared& p, std::ostream& out) {
  if (cfg.dump_ba) out << p.ba.dump();
  if (cfg.dump_product) out << dump_product(p.ptba);
}

// Lists up to a few members of a \ b.
std::string sample(const ValuationSet& a, const ValuationSet& b) {
  const ValuationSet d = a.minus(b);
  std::string s;
  std::size_t shown = 0;
  const ParamBox& box = a.box();
  d.for_each([&](std::size_t index) {
    if (shown++ >= 5) return;
    const Valuation v = box.point(index);
    s += s.empty() ? "(" : " (";
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (k > 0) s += ",";
      s += box.name(static_cast<ParamIndex>(k)) + "=" + std::to_string(v[k]);
    }
    s += ")";
  });
  if (d.count() > 5) s += " ...";
  return s;
}

int compare(const RunConfig& cfg, const Prepared& p, std::ostream& out, std::ostream& err) {
  const SynthesisResult sym = synthesize(p, explore_options(cfg, err));
  const SynthesisResult base = enumerate(p, baseline_options(cfg));
  bool equal = true;
  const auto check = [&](const char* what, const ValuationSet& a, const ValuationSet& b) {
    if (a == b) {
      out << what << ": equal (" << a.count() << " of " << a.box().points() << ")\n";
      return;
    }
    equal = false;
    out << what << ": MISMATCH\n";
    if (!a.minus(b).is_empty()) out << "  symbolic only: " << sample(a, b) << '\n';
    if (!b.minus(a).is_empty()) out << "  enumerate only: " << sample(b, a) << '\n';
  };
  check("satisfying", sym.satisfying, base.satisfying);
  check("violating", sym.accepted, base.accepted);
  check("deadlock", sym.deadlock, base.deadlock);
  if (!cfg.out.empty()) write_document(cfg, result_document(p, sym, "symbolic"), out);
  if (cfg.stats) {
    nlohmann::ordered_json s;
    s["symbolic"] = timing(sym);
    s["enumerate"] = timing(base);
    s["work_ratio"] = base.work == 0 ? 0.0 : static_cast<double>(sym.work) / static_cast<double>(base.work);
    err << s.dump(2) << '\n';
  }
  return equal ? kOk : kMismatch;
}

int synth(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Network net = load_network(cfg);
  const Prepared p = prepare(net, load_property(cfg));
  print_dumps(cfg, p, out);
  if (cfg.engine == "compare") return compare(cfg, p, out, err);
  SynthesisResult r;
  if (cfg.engine == "symbolic") {
    r = synthesize(p, explore_options(cfg, err));
  } else {
    r = enumerate(p, baseline_options(cfg));
  }
  write_document(cfg, result_document(p, r, cfg.engine), out);
  if (cfg.stats) err << timing(r).dump(2) << '\n';
  return kOk;
}

void add_run_options(CLI::App* sub, RunConfig& cfg, bool engine) {
  sub->add_option("--model", cfg.model, "model file")->required();
  sub->add_option("--ltl", cfg.ltl, "LTL property")->required();
  if (engine) {
    sub->add_option("--engine", cfg.engine, "symbolic, enumerate or compare")
        ->check(CLI::IsMember({"symbolic", "enumerate", "compare"}));
  }
  sub->add_option("--param", cfg.params, "override bounds, NAME=LO..HI");
  sub->add_option("--out", cfg.out, "write the result JSON here");
  sub->add_flag("--stats", cfg.stats, "print statistics to stderr");
  sub->add_flag("--trace", cfg.trace, "print visited symbolic states to stderr");
  sub->add_flag("--dump-ba", cfg.dump_ba, "print the automaton of the negated property");
  sub->add_flag("--dump-product", cfg.dump_product, "print the product automaton");
  sub->add_flag("--no-prune", cfg.no_prune, "disable pruning by found valuations");
  sub->add_option("--limit-states", cfg.limit_states, "stored state limit (default 2^22)");
  sub->add_option("--limit-points", cfg.limit_points, "parameter box size limit (default 2^24)");
  sub->add_option("--limit-dnf", cfg.limit_dnf, "deadlock DNF limit (default 4096)");
  sub->add_option("--threads", cfg.threads, "threads for enumeration")->check(CLI::PositiveNumber);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Parameter synthesis for parametric timed automata", "ptasynth"};
  app.require_subcommand(1);
  RunConfig cfg;

  CLI::App* synth_cmd = app.add_subcommand("synth", "synthesize parameter valuations");
  add_run_options(synth_cmd, cfg, true);
  CLI::App* compare_cmd = app.add_subcommand("compare", "run both engines and compare");
  add_run_options(compare_cmd, cfg, false);
  CLI::App* ba_cmd = app.add_subcommand("dump-ba", "print the automaton of the negated property");
  ba_cmd->add_option("--ltl", cfg.ltl, "LTL property")->required();
  CLI::App* product_cmd = app.add_subcommand("dump-product", "print the product automaton");
  product_cmd->add_option("--model", cfg.model, "model file")->required();
  product_cmd->add_option("--ltl", cfg.ltl, "LTL property")->required();
  product_cmd->add_option("--param", cfg.params, "override bounds, NAME=LO..HI");
  CLI::App* validate_cmd = app.add_subcommand("validate", "parse a model");
  validate_cmd->add_option("--model", cfg.model, "model file")->required();
  validate_cmd->add_option("--param", cfg.params, "override bounds, NAME=LO..HI");
  validate_cmd->add_option("--ltl", cfg.ltl, "also parse and resolve this property");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (synth_cmd->parsed()) return synth(cfg, out, err);
    if (compare_cmd->parsed()) {
      const Network net = load_network(cfg);
      const Prepared p = prepare(net, load_property(cfg));
      print_dumps(cfg, p, out);
      return compare(cfg, p, out, err);
    }
    if (ba_cmd->parsed()) {
      const ltl::FormulaPtr f = load_property(cfg);
      out << ltl::to_buchi(ltl::to_nnf(ltl::make_unary(ltl::Op::Not, f))).dump();
      return kOk;
    }
    if (product_cmd->parsed()) {
      const Prepared p = prepare(load_network(cfg), load_property(cfg));
      out << dump_product(p.ptba);
      return kOk;
    }
    if (validate_cmd->parsed()) {
      const Network net = load_network(cfg);
      if (!cfg.ltl.empty()) prepare(net, load_property(cfg));
      out << "ok: " << net.components.size() << " components, " << net.clocks.size() << " clocks, "
          << net.box->size() << " parameters, " << net.box->points() << " valuations\n";
      return kOk;
    }
  } catch (const CapacityError& e) {
    err << "capacity: " << e.what() << '\n';
    return kCapacity;
  } catch (const ModelError& e) {
    err << (cfg.model.empty() ? "" : cfg.model + ": ") << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace ptasynth::cli
