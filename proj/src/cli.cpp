#include "pkgsem/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "pkgsem/applications.hpp"
#include "pkgsem/category.hpp"
#include "pkgsem/correspondence.hpp"
#include "pkgsem/error.hpp"
#include "pkgsem/manifest.hpp"
#include "pkgsem/rewrite.hpp"

namespace pkgsem {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Io {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

std::string slurp(const std::string& path, std::istream& in) {
  std::ostringstream s;
  if (path == "-") {
    s << in.rdbuf();
    return s.str();
  }
  std::ifstream f(path);
  if (!f) throw UsageError("cannot open " + path);
  s << f.rdbuf();
  return s.str();
}

std::string first_word(const std::string& text) {
  std::istringstream s(text);
  std::string w;
  s >> w;
  return w;
}

// Manifests start with `Name:`, structures with one of their line keywords,
// anything else is read as a process term.
EventStructure load_structure(const std::string& text) {
  std::string w = first_word(text);
  if (w.empty()) return EventStructure();
  if (w == "Name:") return to_event_structure(parse_manifest(text));
  if (w == "event" || w == "conflict" || w == "enable") return parse_structure(text);
  auto r = wae_normal(parse_term(text));
  return denote(r.term, symbols(parse_term(text)));
}

std::vector<std::pair<EventId, EventId>> parse_pairs(const std::vector<std::string>& items, char sep) {
  std::vector<std::pair<EventId, EventId>> out;
  for (const auto& item : items) {
    auto at = item.find(sep);
    if (at == std::string::npos || at == 0 || at + 1 == item.size()) {
      throw UsageError("expected <a>" + std::string(1, sep) + "<b>, got '" + item + "'");
    }
    out.push_back({item.substr(0, at), item.substr(at + 1)});
  }
  return out;
}

struct Options {
  std::size_t state_cap = kDefaultStateCap;
  std::string file, file2, file3, target, model = "strict", backend = "search";
  std::vector<std::string> pairs, installs;
  bool wait = false, wae = false, syntactic = false, glue = false, classify = false;
};

int dispatch(const std::string& cmd, const Options& o, Io io) {
  auto read = [&](const std::string& p) { return slurp(p, io.in); };

  if (cmd == "parse") {
    io.out << to_text(parse_manifest(read(o.file)));
    return 0;
  }
  if (cmd == "to-ces") {
    io.out << to_text(load_structure(read(o.file)));
    return 0;
  }
  if (cmd == "to-cep") {
    io.out << to_string(encode(load_structure(read(o.file))).term) << "\n";
    return 0;
  }
  if (cmd == "normalize") {
    Term t = parse_term(read(o.file));
    if (o.wait) {
      io.out << to_string(wait_normal(t)) << "\n";
      return 0;
    }
    auto r = wae_normal(t);
    io.out << to_string(r.term) << "\n";
    if (!r.silent.empty()) {
      io.out << "# silent:";
      for (const auto& s : r.silent) io.out << " " << s;
      io.out << "\n";
    }
    return 0;
  }
  if (cmd == "traces") {
    for (const auto& tr : traces(parse_term(read(o.file)), o.state_cap)) io.out << render_trace(tr) << "\n";
    return 0;
  }
  if (cmd == "tree") {
    io.out << sync_tree(parse_term(read(o.file)), o.state_cap).render();
    return 0;
  }
  if (cmd == "deadlock-check") {
    Term t = parse_term(read(o.file));
    if (o.syntactic) {
      bool ok = syntactic_deadlock_free(t);
      io.out << (ok ? "deadlock-free" : "possible deadlock") << "\n";
      return ok ? 0 : 1;
    }
    auto d = find_deadlock(t, o.state_cap);
    if (!d) {
      io.out << "deadlock-free\n";
      return 0;
    }
    io.out << "deadlock after " << render_trace(d->fired) << ": " << to_string(d->term) << "\n";
    return 1;
  }
  if (cmd == "solve") {
    auto g = load_structure(read(o.file));
    if (o.backend == "search") {
      auto plan = solve(g, o.target, o.state_cap);
      if (!plan) {
        io.out << "unsolvable\n";
        return 1;
      }
      for (std::size_t i = 0; i < plan->install_order.size(); ++i) io.out << (i ? " " : "") << plan->install_order[i];
      io.out << "\n";
      return 0;
    }
    bool ok = o.backend == "oracle" ? solve_oracle(g, o.target) : solve_wae(g, o.target);
    io.out << (ok ? "solvable" : "unsolvable") << "\n";
    return ok ? 0 : 1;
  }
  if (cmd == "quotient") {
    auto m = parse_manifest(read(o.file));
    VersionPairs pairs = o.pairs.empty() ? version_pairs(m) : parse_pairs(o.pairs, '=');
    io.out << to_text(quotient_manifest(m, pairs));
    return 0;
  }
  if (cmd == "compose") {
    auto a = load_structure(read(o.file));
    auto b = load_structure(read(o.file2));
    Sharing shared;
    if (o.pairs.empty()) {
      for (const auto& e : a.events()) {
        if (b.contains(e)) shared.push_back({e, e});
      }
    } else {
      shared = parse_pairs(o.pairs, '=');
    }
    auto c = o.glue ? glue_shared_names(a, b, shared) : pushout_shared_names(a, b, shared);
    io.out << to_text(c.object);
    return 0;
  }
  if (cmd == "check-morphism") {
    auto m = parse_relation(read(o.file3), load_structure(read(o.file)), load_structure(read(o.file2)));
    auto v = check_morphism(m);
    for (const auto& line : v) io.out << line << "\n";
    if (v.empty()) io.out << "valid\n";
    if (o.classify && v.empty()) {
      auto yes = [](bool b) { return b ? "yes" : "no"; };
      io.out << "mono: " << yes(is_mono(m)) << "\n";
      io.out << "epi: " << yes(is_epi(m)) << "\n";
      io.out << "metadata map: " << yes(is_metadata_map(m)) << "\n";
      io.out << "split mono: " << yes(is_split_mono(m).split) << "\n";
      io.out << "minimal split mono: " << to_string(classify_minimal_split_mono(m)) << "\n";
    }
    return v.empty() ? 0 : 1;
  }
  if (cmd == "semantics") {
    auto model = parse_conflict_model(o.model);
    auto run = run_conflict_model(parse_manifest(read(o.file)), o.installs, model);
    io.out << render(run, model);
    if (run.failure) {
      io.err << "pkgsem: unsatisfiable request " << *run.failure << "\n";
      return 1;
    }
    return 0;
  }
  throw UsageError("unknown subcommand " + cmd);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Package repositories as event structures and processes", "pkgsem"};
  app.require_subcommand(1, 1);
  Options o;
  app.add_option("--state-cap", o.state_cap, "bound on explored states")->capture_default_str();

  auto file = [&](CLI::App* s, std::string& slot, const char* name) {
    s->add_option(name, slot, "input file, - for standard input")->required();
  };
  auto* parse = app.add_subcommand("parse", "validate a manifest and print its canonical form");
  file(parse, o.file, "manifest");
  auto* ces = app.add_subcommand("to-ces", "print the event structure of a manifest, structure or term");
  file(ces, o.file, "input");
  auto* cep = app.add_subcommand("to-cep", "print a process term for a manifest, structure or term");
  file(cep, o.file, "input");
  auto* norm = app.add_subcommand("normalize", "wait-normal or wae-normal form of a term");
  file(norm, o.file, "term");
  auto* w1 = norm->add_flag("--wait", o.wait, "wait-normal form");
  auto* w2 = norm->add_flag("--wae", o.wae, "wae-normal form");
  w1->excludes(w2);
  auto* tr = app.add_subcommand("traces", "every trace of a term, sorted");
  file(tr, o.file, "term");
  auto* tree = app.add_subcommand("tree", "synchronization tree of a term");
  file(tree, o.file, "term");
  auto* dl = app.add_subcommand("deadlock-check", "search a term for a reachable deadlock");
  file(dl, o.file, "term");
  dl->add_flag("--syntactic", o.syntactic, "use the ordering criterion on the normal form");
  auto* sv = app.add_subcommand("solve", "build plan for one package");
  file(sv, o.file, "repository");
  sv->add_option("package", o.target, "package to build")->required();
  sv->add_option("--backend", o.backend, "search, oracle or wae")
      ->check(CLI::IsMember({"search", "oracle", "wae"}))
      ->capture_default_str();
  auto* qt = app.add_subcommand("quotient", "merge version-related packages of a manifest");
  file(qt, o.file, "manifest");
  qt->add_option("--pair", o.pairs, "lower=higher (default: every related pair)");
  auto* cp = app.add_subcommand("compose", "pushout of two repositories along shared names");
  file(cp, o.file, "left");
  file(cp, o.file2, "right");
  cp->add_option("--share", o.pairs, "left=right (default: equal names)");
  cp->add_flag("--glue", o.glue, "side-by-side gluing instead of the pushout");
  auto* cm = app.add_subcommand("check-morphism", "check a relation between two repositories");
  file(cm, o.file, "source");
  file(cm, o.file2, "target");
  file(cm, o.file3, "relation");
  cm->add_flag("--classify", o.classify, "also report mono, epi and split properties");
  auto* sem = app.add_subcommand("semantics", "install packages under a conflict model");
  file(sem, o.file, "manifest");
  sem->add_option("--model", o.model, "strict, vendored, last-wins or mangled")
      ->check(CLI::IsMember({"strict", "vendored", "last-wins", "mangled"}))
      ->capture_default_str();
  sem->add_option("--install", o.installs, "packages in request order")->required();

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "pkgsem: " << e.what() << "\n";
    return 2;
  }
  if (o.wait == o.wae && norm->parsed()) {
    err << "pkgsem: normalize needs --wait or --wae\n";
    return 2;
  }

  try {
    return dispatch(app.get_subcommands().front()->get_name(), o, {in, out, err});
  } catch (const UsageError& e) {
    err << "pkgsem: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "pkgsem: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return e.kind() == ErrorKind::Syntax ? 2 : 1;
  }
}

}  // namespace pkgsem
