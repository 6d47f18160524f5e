#include "doctest.h"
#include "generators.hpp"
#include "pkgsem/correspondence.hpp"
#include "pkgsem/error.hpp"

using namespace pkgsem;
using pkgsem::testing::Rng;

namespace {

const EventId t1 = "text-1", t2 = "text-2", l1 = "leftpad-1.1", l2 = "leftpad-1.2";

EventStructure text_leftpad() {
  return EventStructure({t1, t2, l1, l2}, {{t1, t2}, {l1, l2}},
                        {{t1, {{}}}, {t2, {{}}}, {l1, {{t1}, {t2}}}, {l2, {{t1}, {t2}}}});
}

Term fixture_term() { return parse_term(pkgsem::testing::fixture("text_leftpad.cep")); }

}  // namespace

TEST_CASE("denote the text/leftpad term") {
  auto w = wae_normal(fixture_term());
  REQUIRE(w.silent.empty());
  auto g = denote(w);
  CHECK(validate(g).empty());
  CHECK(g.events() == std::set<EventId>{t1, t2, l1, l2});
  CHECK(g.enablings(l1) == ContextFamily{{t1}, {t2}});
  CHECK(g.enablings(t1) == ContextFamily{{}});
  CHECK(g.configurations() == text_leftpad().configurations());
}

TEST_CASE("denote small sums") {
  auto a = denote(wae_normal(parse_term("a")));
  CHECK(a.events() == std::set<EventId>{"a"});
  CHECK(a.enablings("a") == ContextFamily{{}});
  CHECK(a.conflicts().empty());

  auto c = denote(wae_normal(parse_term("e1 + e2![e1]")));
  CHECK(c.conflicts() == ContextFamily{{"e1", "e2"}});

  auto x = denote(FlatSum{}, {"z"});
  CHECK(x.events() == std::set<EventId>{"z"});
  CHECK(x.enablings("z").empty());
}

TEST_CASE("denote rejects sums that are not wae-normal") {
  try {
    denote(FlatSum{{{}, "e", {}}, {{"a"}, "e", {}}});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotWaeNormal);
  }
}

TEST_CASE("encode the text/leftpad structure") {
  auto enc = encode(text_leftpad());
  CHECK(enc.virtual_events.empty());
  CHECK(trace_equiv(enc.term, fixture_term()));
  CHECK(roundtrip_check(text_leftpad()));
}

TEST_CASE("encode edge cases") {
  CHECK(encode(EventStructure({}, {}, {})).term.is_nil());

  EventStructure never({"a", "b"}, {{"b"}}, {{"a", {{}}}, {"b", {{}}}});
  auto e = encode(never);
  CHECK(fired_sets(e.term) == std::set<Context>{{}, {"a"}});
  CHECK(symbols(e.term).count("b") == 1);
  CHECK(roundtrip_check(never));
}

TEST_CASE("ternary conflicts use choice events") {
  EventStructure g({"a", "b", "c"}, {{"a", "b", "c"}}, {{"a", {{}}}, {"b", {{}}}, {"c", {{}}}});
  auto enc = encode(g);
  CHECK(enc.virtual_events.size() == 3);
  CHECK(roundtrip_check(g));
}

TEST_CASE("choice names must be fresh") {
  EventStructure g({"a", "b", "conf#1"}, {{"a", "b", "conf#1"}},
                   {{"a", {{}}}, {"b", {{}}}, {"conf#1", {{}}}});
  CHECK_THROWS_AS(encode(g), Error);
}

TEST_CASE("property: encode then compare configurations") {
  Rng rng(31);
  for (int i = 0; i < 150; ++i) {
    auto g = pkgsem::testing::random_structure(rng, 4, 2);
    INFO(to_text(g));
    CHECK(roundtrip_check(g));
  }
}

TEST_CASE("denote after encode gives back the text/leftpad configurations") {
  auto enc = encode(text_leftpad());
  CHECK(denote(wae_normal(enc.term)).configurations() == text_leftpad().configurations());
}

TEST_CASE("property: denote yields valid structures") {
  Rng rng(32);
  for (int i = 0; i < 150; ++i) {
    Term t = pkgsem::testing::random_term(rng, 4, 3);
    INFO(to_string(t));
    auto g = denote(wae_normal(t));
    CHECK(validate(g).empty());
  }
}

TEST_CASE("property: conflict-free sums denote the full powerset") {
  Rng rng(33);
  for (int i = 0; i < 150; ++i) {
    Term t = pkgsem::testing::random_plain_term(rng, 4, 3);
    INFO(to_string(t));
    auto g = denote(wae_normal(t));
    for (const auto& c : pkgsem::testing::powerset(g.events())) CHECK(g.is_consistent(c));
  }
}
