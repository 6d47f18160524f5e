#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pkgsem/event_structure.hpp"

namespace pkgsem {

/// f : P -> P(P'), stored for every source event (missing events map to {}).
using Relation = std::map<EventId, Context>;
/// (dependent, dependency) pairs inside one image: a split that makes one
/// half depend on the other.
using SplitDeps = std::set<std::pair<EventId, EventId>>;

struct RelationalMorphism {
  EventStructure source;
  EventStructure target;
  Relation map;
  SplitDeps split_deps;

  const Context& operator()(const EventId& e) const;
};

/// Fills in empty images; throws UnknownEvent for events outside either end
/// and Shape for a split dependency that does not sit inside one image.
RelationalMorphism make_morphism(EventStructure source, EventStructure target, Relation map,
                                 SplitDeps split_deps = {});

/// One line per violated instance of conditions (i) and (ii).
std::vector<std::string> check_morphism(const RelationalMorphism& m);
bool is_valid(const RelationalMorphism& m);

Context induced_powerset_map(const Relation& r, const Context& x);
inline Context induced_powerset_map(const RelationalMorphism& m, const Context& x) {
  return induced_powerset_map(m.map, x);
}

RelationalMorphism identity(const EventStructure& ges);
/// g after f; throws Shape unless f.target == g.source.
RelationalMorphism compose(const RelationalMorphism& g, const RelationalMorphism& f);
Relation transpose(const RelationalMorphism& m);

bool is_mono(const RelationalMorphism& m);
bool is_epi(const RelationalMorphism& m);
/// Powerset injectivity by enumeration; throws SizeGuard past `max_events`.
bool is_mono_brute_force(const RelationalMorphism& m, std::size_t max_events = 16);
bool is_metadata_map(const RelationalMorphism& m);

/// Only {} is consistent (every event is a singleton conflict), nothing is enabled.
EventStructure disc(const EventStructure& ges);
/// Everything is consistent, every event is enabled by {}.
EventStructure codisc(const EventStructure& ges);

/// second after first equals the input.
struct Factorization {
  RelationalMorphism first;
  RelationalMorphism second;
};

/// f : A -> Codisc(B) as A -> Codisc(A) -> Codisc(B).
Factorization factor_reflection(const RelationalMorphism& f);
/// f : Disc(A) -> B as Disc(A) -> Disc(B) -> B.
Factorization factor_coreflection(const RelationalMorphism& f);
/// f : A -> B as A -> X -> B where X carries only the metadata transported
/// along f and X -> B is a metadata map. Throws SizeGuard past `max_events`.
Factorization factor_metadata(const RelationalMorphism& f, std::size_t max_events = 16);

/// Object with legs a -> object <- b.
struct Cospan {
  EventStructure object;
  RelationalMorphism left;
  RelationalMorphism right;
};

/// Object with projections a <- object -> b.
struct Span {
  EventStructure object;
  RelationalMorphism left;
  RelationalMorphism right;
};

/// (event of a, event of b) pairs to identify.
using Sharing = std::vector<std::pair<EventId, EventId>>;

/// Events `L:x`, `R:y`, identified events keep the name from a. A context is
/// consistent when it lies in one leg and is consistent there. Throws Shape
/// for non-injective sharing, UnknownEvent, NameCollision.
Cospan pushout_shared_names(const EventStructure& a, const EventStructure& b, const Sharing& shared);
Cospan coproduct(const EventStructure& a, const EventStructure& b);

/// Side-by-side gluing: a context is consistent when both of its halves are.
/// The legs are injections and need not be valid morphisms.
Cospan glue_shared_names(const EventStructure& a, const EventStructure& b, const Sharing& shared);
Span product(const EventStructure& a, const EventStructure& b);

/// Every valid morphism a -> b, by enumeration of all relations. Throws
/// SizeGuard when there are more than `max_relations` candidates.
std::vector<RelationalMorphism> enumerate_morphisms(const EventStructure& a, const EventStructure& b,
                                                    std::size_t max_relations = std::size_t{1} << 20);

/// Every cocone (g_a, g_b) into y agreeing on `shared` factors through the
/// cospan's legs by exactly one valid morphism, and nothing else does.
bool has_universal_property(const Cospan& c, const Sharing& shared, const EventStructure& y,
                            std::size_t max_relations = std::size_t{1} << 20);

struct SplitMonoResult {
  bool split = false;
  std::optional<RelationalMorphism> retract;
};
SplitMonoResult is_split_mono(const RelationalMorphism& m, std::size_t max_candidates = 1'000'000);

enum class SplitKind { Extension, Splitting, Neither };
const char* to_string(SplitKind k);
SplitKind classify_minimal_split_mono(const RelationalMorphism& m);

/// Lines `src -> t1,t2` (right side may be empty) and `split-dep dependent <- dependency`.
RelationalMorphism parse_relation(std::string_view text, EventStructure source, EventStructure target);
std::string to_text(const RelationalMorphism& m);

}  // namespace pkgsem
