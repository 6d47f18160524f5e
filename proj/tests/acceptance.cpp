#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

#include "generators.hpp"
#include "pkgsem/applications.hpp"
#include "pkgsem/category.hpp"
#include "pkgsem/cli.hpp"
#include "pkgsem/correspondence.hpp"
#include "pkgsem/error.hpp"
#include "pkgsem/rewrite.hpp"

using namespace pkgsem;
using pkgsem::testing::fixture;
using pkgsem::testing::Rng;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

EventStructure S(const char* term) { return denote(wae_normal(parse_term(term))); }

std::string cli(std::vector<std::string> args) {
  std::istringstream in;
  std::ostringstream out, err;
  run_cli(args, in, out, err);
  return out.str();
}

EventId pick_event(Rng& rng) { return std::string(1, static_cast<char>('a' + rng() % 5)); }

std::vector<Term> corpus() {
  Rng rng(2024);
  std::vector<Term> out;
  for (int i = 0; i < 300; ++i) out.push_back(pkgsem::testing::random_term(rng, 5, 4));
  return out;
}

Outcome traces_and_tree() {
  Term t = parse_term(fixture("abc.cep"));
  TraceSet want{{}, {"a"}, {"a", "b"}, {"a", "c"}, {"a", "b", "c"}, {"a", "c", "b"}};
  std::size_t nodes = sync_tree(t).node_count();
  bool ok = traces(t) == want && nodes == 6;
  return {ok, std::to_string(traces(t).size()) + " traces, " + std::to_string(nodes) + " tree nodes"};
}

Outcome manifest_to_process() {
  auto g = to_event_structure(parse_manifest(fixture("text_leftpad.manifest")));
  Term enc = encode(g).term;
  Term six = parse_term(fixture("text_leftpad.cep"));
  auto tree = sync_tree(enc);
  bool shape = tree.root.children.size() == 2;
  for (const auto& c : tree.root.children) {
    shape = shape && c.children.size() == 2;
    for (const auto& d : c.children) shape = shape && d.children.empty();
  }
  bool equiv = trace_equiv(enc, six);
  return {equiv && shape, std::string(equiv ? "trace-equivalent" : "not trace-equivalent") +
                              (shape ? ", 2x2 tree" : ", wrong tree shape")};
}

Outcome algebra_laws() {
  Rng rng(4);
  int failures = 0, checked = 0, rejected = 0;
  auto law = [&](const Term& l, const Term& r) {
    ++checked;
    if (!trace_equiv(l, r)) ++failures;
  };
  // Terms whose own state space is large make p + p intractable.
  auto sample = [&](int depth) {
    while (true) {
      Term t = pkgsem::testing::random_term(rng, 5, depth);
      try {
        traces(t, 5000);
        return t;
      } catch (const Error&) {
        ++rejected;
      }
    }
  };
  for (int i = 0; i < 200; ++i) {
    Term p = sample(4);
    Term q = sample(3);
    Term r = sample(2);
    EventId e = pick_event(rng), w1 = pick_event(rng), w2 = pick_event(rng);
    std::vector<EventId> x;
    if (EventId c = pick_event(rng); c != e) x.push_back(c);
    law(Term::par({Term::par({p, q}), r}), Term::par({p, Term::par({q, r})}));
    law(Term::par({p, q}), Term::par({q, p}));
    law(Term::par({p, Term::nil()}), p);
    law(Term::par({p, p}), p);
    law(Term::fire(e, x, Term::par({p, q})), Term::par({Term::fire(e, x, p), Term::fire(e, x, q)}));
    law(Term::wait(e, Term::par({p, q})), Term::par({Term::wait(e, p), Term::wait(e, q)}));
    law(Term::wait(w1, Term::wait(w2, p)), Term::wait(w2, Term::wait(w1, p)));
    law(Term::wait(w1, Term::wait(w1, p)), Term::wait(w1, p));
    law(Term::wait(w1, Term::nil()), Term::nil());
    law(Term::par({Term::wait(w1, Term::wait(w2, p)), Term::wait(w2, p)}), Term::wait(w2, p));
    law(Term::fire(e, x, p), Term::par({Term::fire(e, x), Term::wait(e, p)}));
    law(Term::wait(w1, Term::fire(e, x, p)), Term::par({Term::wait(w1, Term::fire(e, x)), Term::wait(e, p)}));
  }
  return {failures == 0, std::to_string(failures) + " failures in " + std::to_string(checked) + " law instances, " +
                            std::to_string(rejected) + " oversized terms redrawn"};
}

Outcome deadlock_iff() {
  int disagree = 0;
  auto terms = corpus();
  terms.push_back(parse_term("~a.b + ~b.a"));
  for (const auto& t : terms) {
    if (syntactic_deadlock_free(t) != is_deadlock_free_semantic(t)) ++disagree;
  }
  bool fixed = !syntactic_deadlock_free(terms.back()) && !is_deadlock_free_semantic(terms.back());
  return {disagree == 0 && fixed,
          std::to_string(disagree) + " disagreements in " + std::to_string(terms.size()) + " terms"};
}

Outcome wae_suite() {
  auto r = wae_normal(parse_term("~a.~b.e + ~a.e![c]"));
  bool fixed = to_string(r.term) == "~e#wae1.e + ~e#wae2.e + ~a.e#wae1![c] + ~a.~b.e#wae2" && r.silent.size() == 2;
  int failures = 0;
  for (const auto& t : corpus()) {
    auto w = wae_normal(t);
    if (!weak_trace_equiv(t, to_term(w.term), w.silent)) ++failures;
  }
  return {fixed && failures == 0,
          std::string(fixed ? "fixed example matches" : "fixed example differs") + ", " + std::to_string(failures) +
              " corpus failures"};
}

Outcome correspondence() {
  Rng rng(6);
  int failures = 0;
  for (int i = 0; i < 150; ++i) {
    if (!roundtrip_check(pkgsem::testing::random_structure(rng, 4, 2))) ++failures;
  }
  auto g = to_event_structure(parse_manifest(fixture("text_leftpad.manifest")));
  bool fixed = denote(wae_normal(encode(g).term)).configurations() == g.configurations();
  return {failures == 0 && fixed, std::to_string(failures) + " roundtrip failures in 150" +
                                      (fixed ? ", text/leftpad configurations agree" : ", text/leftpad differs")};
}

Outcome category() {
  auto free = S("a + b");
  bool nonexamples = !is_valid(make_morphism(free, S("~b.a"), {{"a", {"a"}}, {"b", {"b"}}})) &&
                     !is_valid(make_morphism(free, S("a![b] + b"), {{"a", {"a"}}, {"b", {"b"}}}));
  auto web = S("web");
  auto split = S("web-core + ~web-core.web-ui");
  auto both = S("web-ui + ~web-ui.web-ui-forms");
  bool web_ok =
      is_valid(make_morphism(web, split, {{"web", {"web-core", "web-ui"}}}, {{"web-ui", "web-core"}})) &&
      is_valid(make_morphism(both, S("web-ui"), {{"web-ui-forms", {"web-ui"}}, {"web-ui", {"web-ui"}}}));
  auto two = S("p + q");
  bool counts = enumerate_morphisms(codisc(two), codisc(two)).size() == 16 &&
                enumerate_morphisms(codisc(two), disc(two)).size() == 1;
  std::vector<EventStructure> objects = {S("a"), S("a + ~a.b"), S("a![b] + b"), disc(S("a + b")), S("a + b")};
  std::vector<EventStructure> probes = {S("u"), S("u + v"), S("u![v] + v"), S("u + ~u.v")};
  int checks = 0, failures = 0;
  for (const auto& a : objects) {
    for (const auto& b : objects) {
      auto c = coproduct(a, b);
      for (const auto& y : probes) {
        ++checks;
        if (!has_universal_property(c, {}, y)) ++failures;
      }
      Sharing n{{"a", "a"}};
      auto p = pushout_shared_names(a, b, n);
      for (const auto& y : probes) {
        ++checks;
        if (!has_universal_property(p, n, y)) ++failures;
      }
    }
  }
  bool ok = nonexamples && web_ok && counts && failures == 0;
  std::string d = std::string(nonexamples ? "non-examples rejected" : "non-example accepted") +
                  (web_ok ? ", web maps valid" : ", web map invalid") + (counts ? ", counts 16/1" : ", wrong counts") +
                  ", " + std::to_string(failures) + "/" + std::to_string(checks) + " universal failures";
  return {ok, d};
}

Outcome solver() {
  Rng rng(8);
  int disagree = 0, violations = 0, queries = 0;
  for (int i = 0; i < 120; ++i) {
    auto m = pkgsem::testing::random_manifest(rng, 8);
    auto g = to_event_structure(m);
    for (const auto& e : g.events()) {
      ++queries;
      bool oracle = solve_oracle(g, e);
      if (solve(g, e).has_value() != oracle || solve_wae(g, e) != oracle) ++disagree;
    }
    for (const auto& a : m.packages) {
      for (const auto& b : m.packages) {
        if (a.name != b.name || !(a.version < b.version) || !is_version_related(g, a.id(), b.id())) continue;
        auto quot = quotient_versions(g, {{a.id(), b.id()}});
        for (const auto& e : quot.events()) {
          if (solve_oracle(g, e) != solve_oracle(quot, e)) ++violations;
        }
      }
    }
  }
  return {disagree == 0 && violations == 0, std::to_string(disagree) + " backend disagreements in " +
                                                std::to_string(queries) + " queries, " +
                                                std::to_string(violations) + " quotient violations"};
}

Outcome conflict_models() {
  std::string m = std::string(PKGSEM_FIXTURES) + "/diamond.manifest";
  auto run = [&](const char* model) { return cli({"semantics", m, "--model", model, "--install", "text-1.1", "leftpad-1.2"}); };
  int ok = 0;
  ok += run("vendored") == "text-1.1\ntext-1.2@text-1.1\nleftpad-1.2\n";
  ok += run("last-wins") == "text-1.2\nleftpad-1.2\nhistory: text-1.1 text-1.2 leftpad-1.2\n";
  ok += run("mangled") == "text-1.1\nmangle(text-1.2)\nleftpad-1.2@mangle(text-1.2)\n";
  return {ok == 3, std::to_string(ok) + "/3 renderings exact"};
}

}  // namespace

int main() {
  std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"traces and tree of a.b + ~a.c", traces_and_tree},
      {"manifest to process term", manifest_to_process},
      {"algebra laws", algebra_laws},
      {"syntactic deadlock criterion iff deadlock freedom", deadlock_iff},
      {"wae-normal form", wae_suite},
      {"structure/process correspondence", correspondence},
      {"morphisms and colimits", category},
      {"solver backends and quotients", solver},
      {"conflict models", conflict_models},
  };
  int failed = 0, n = 0;
  for (const auto& [name, check] : criteria) {
    ++n;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !o.pass;
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << n << ". " << name << ": " << o.detail << " (" << secs << "s)\n";
  }
  std::cout << (n - failed) << "/" << n << " criteria pass\n";
  return failed == 0 ? 0 : 1;
}
