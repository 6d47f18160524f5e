#include "doctest.h"
#include "generators.hpp"
#include "pkgsem/error.hpp"
#include "pkgsem/rewrite.hpp"

using namespace pkgsem;
using pkgsem::testing::Rng;

namespace {

Term P(const char* s) { return parse_term(s); }
std::string wn(const char* s) { return to_string(wait_normal(P(s))); }
std::string ewn(const char* s) { return to_string(expanded_wait_normal(wait_normal(P(s)))); }

}  // namespace

TEST_CASE("canonicalize") {
  CHECK(canonicalize(P("b + a")) == P("a + b"));
  CHECK(canonicalize(P("~a.~a.b")) == P("~a.b"));
  CHECK(canonicalize(Term::par({P("a"), Term::nil()})) == P("a"));
  CHECK(canonicalize(P("~b.~a.c![y,x] + (d + d)")) == P("d + ~a.~b.c![x,y]"));
  CHECK(canonicalize(P("~a.0 + b")) == P("b"));
}

TEST_CASE("property: canonicalize is idempotent and trace-preserving") {
  Rng rng(21);
  for (int i = 0; i < 200; ++i) {
    Term t = pkgsem::testing::random_term(rng, 5, 3);
    Term c = canonicalize(t);
    CHECK(canonicalize(c) == c);
    CHECK(trace_equiv(t, c));
  }
}

TEST_CASE("wait_normal") {
  CHECK(wn("a.b.c") == "a + ~a.b + ~a.~b.c");
  CHECK(wait_normal(P("~a.0")).empty());
  CHECK(wn("~a.b + b") == "b");
  CHECK(wn("0.a + b") == "b");
  CHECK(wn("a.a![x]") == "a");
  CHECK(wn("~a.(b.c + d)") == "~a.b + ~a.~b.c + ~a.d");
  CHECK(wn("~a.b![c] + b") == "b + ~a.b![c]");
}

TEST_CASE("flat sums read back") {
  FlatSum f = wait_normal(P("a.b + ~a.c![d]"));
  CHECK(as_flat_sum(to_term(f)) == f);
  CHECK_THROWS_AS(as_flat_sum(P("a.b")), Error);
  CHECK(as_flat_sum(P("0.a + b")) == wait_normal(P("b")));
}

TEST_CASE("property: wait_normal preserves traces without exclusions") {
  Rng rng(22);
  for (int i = 0; i < 200; ++i) {
    Term t = pkgsem::testing::random_plain_term(rng, 5, 4);
    INFO(to_string(t));
    auto f = wait_normal(t);
    CHECK(trace_equiv(t, to_term(f)));
    CHECK(wait_normal(to_term(f)) == f);
  }
}

TEST_CASE("peeling an exclusive firing is not a congruence") {
  // After x and a plain a, the guarded b can no longer be unlocked.
  Term t = P("a![x].b + a + x");
  CHECK(trace_equiv(P("a![x].b"), to_term(wait_normal(P("a![x].b")))));
  CHECK_FALSE(trace_equiv(t, to_term(wait_normal(t))));
}

TEST_CASE("expanded_wait_normal") {
  CHECK(ewn("a + ~a.b + ~b.c") == "a + ~a.b + ~a.~b.c");
  CHECK(ewn("a1 + a2 + ~a1.b + ~a2.b + ~b.c") ==
        "a1 + a2 + ~a1.b + ~a2.b + ~a1.~b.c + ~a2.~b.c");
  auto once = expanded_wait_normal(wait_normal(P("a + ~a.b + ~b.c")));
  CHECK(expanded_wait_normal(once) == once);
  CHECK(ewn("~z.a + b") == "~z.a + b");
  CHECK(ewn("~a.b + ~b.a") == "0");
}

TEST_CASE("expansion bound") {
  CHECK_THROWS_AS(expanded_wait_normal(wait_normal(P("a1 + a2 + ~a1.b + ~a2.b + ~b.c")), 3), Error);
}

TEST_CASE("property: expansion preserves traces of wait-normal sums") {
  Rng rng(23);
  for (int i = 0; i < 200; ++i) {
    Term t = to_term(wait_normal(pkgsem::testing::random_term(rng, 5, 4)));
    INFO(to_string(t));
    auto e = expanded_wait_normal(as_flat_sum(t));
    CHECK(trace_equiv(t, to_term(e)));
    CHECK(expanded_wait_normal(e) == e);
  }
}

TEST_CASE("wae_normal splits through silent events") {
  auto r = wae_normal(P("~a.~b.e + ~a.e![c]"));
  CHECK(r.silent == std::set<EventId>{"e#wae1", "e#wae2"});
  CHECK(to_string(r.term) == "~e#wae1.e + ~e#wae2.e + ~a.e#wae1![c] + ~a.~b.e#wae2");
  CHECK(is_wae_normal(r.term));
  CHECK(weak_trace_equiv(P("~a.~b.e + ~a.e![c]"), to_term(r.term), r.silent));
}

TEST_CASE("wae_normal splits rather than widening exclusions") {
  // Widening to ~a.e![c,d] would forbid d after e.
  Term t = P("a + b + c + d + ~a.~b.e![c,d] + ~a.e![c]");
  auto r = wae_normal(t);
  CHECK(r.silent.size() == 2);
  CHECK(weak_trace_equiv(t, to_term(r.term), r.silent));
  Term widened = P("a + b + c + d + ~a.e![c,d]");
  CHECK_FALSE(trace_equiv(t, widened));
}

TEST_CASE("wae_normal leaves wae-normal input alone") {
  Term t = P("text-1 + text-2![text-1] + ~text-1.leftpad-1.1 + ~text-2.leftpad-1.1");
  auto r = wae_normal(t);
  CHECK(r.silent.empty());
  CHECK(r.term == as_flat_sum(t));
}

TEST_CASE("silent name collisions are errors") {
  try {
    wae_normal(P("~a.~b.e + ~a.e![c] + e#wae1"));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NameCollision);
  }
}

TEST_CASE("property: wae_normal output is wae-normal and weakly equivalent") {
  Rng rng(24);
  for (int i = 0; i < 200; ++i) {
    Term t = to_term(wait_normal(pkgsem::testing::random_term(rng, 5, 4)));
    INFO(to_string(t));
    auto r = wae_normal(t);
    CHECK(is_wae_normal(r.term));
    CHECK(weak_trace_equiv(t, to_term(r.term), r.silent));
    for (const auto& s : r.silent) CHECK(symbols(t).count(s) == 0);
    if (r.silent.empty()) {
      for (std::size_t a = 0; a < r.term.size(); ++a) {
        for (std::size_t b = 0; b < r.term.size(); ++b) {
          if (a != b && r.term[a].fire == r.term[b].fire) {
            CHECK_FALSE(is_subset(r.term[a].waits, r.term[b].waits));
          }
        }
      }
    }
    auto again = wae_normal(to_term(r.term));
    CHECK(is_wae_normal(again.term));
    if (r.silent.empty()) {
      CHECK(again.silent.empty());
      CHECK(again.term == r.term);
    }
  }
}

TEST_CASE("syntactic deadlock criterion") {
  CHECK_FALSE(syntactic_deadlock_free(P("~a.b + ~b.a")));
  CHECK(syntactic_deadlock_free(P("a + ~a.b")));
  CHECK(syntactic_deadlock_free(P("0.a")));
  CHECK_FALSE(syntactic_deadlock_free(P("~z.a")));
}

TEST_CASE("property: both deadlock criteria agree on exclusion-free terms") {
  Rng rng(25);
  for (int i = 0; i < 300; ++i) {
    Term t = pkgsem::testing::random_plain_term(rng, 5, 4);
    INFO(to_string(t));
    CHECK(syntactic_deadlock_free(t) == is_deadlock_free_semantic(t));
  }
}

TEST_CASE("exclusions break the ordering criterion") {
  // c excludes a, after which the cycle is attributable to the exclusion.
  Term t = P("~a.b + ~b.a + c![a]");
  CHECK(is_deadlock_free_semantic(t));
  CHECK_FALSE(syntactic_deadlock_free(t));
}
