#pragma once

#include <compare>
#include <cstddef>
#include <set>
#include <vector>

#include "pkgsem/cep.hpp"

namespace pkgsem {

/// `~w1.~w2...fire![exclusions]`
struct NormalSummand {
  Context waits;
  EventId fire;
  Context exclusions;

  friend auto operator<=>(const NormalSummand& a, const NormalSummand& b) {
    if (auto c = a.fire <=> b.fire; c != 0) return c;
    if (auto c = a.waits <=> b.waits; c != 0) return c;
    return a.exclusions <=> b.exclusions;
  }
  friend bool operator==(const NormalSummand&, const NormalSummand&) = default;
};

/// Sorted, duplicate-free parallel sum of normal summands.
using FlatSum = std::vector<NormalSummand>;

Term to_term(const NormalSummand& s);
Term to_term(const FlatSum& f);
/// Reads back a term already in flat normal shape; throws Error(Shape) otherwise.
FlatSum as_flat_sum(const Term& t);
std::string to_string(const FlatSum& f);
std::set<EventId> symbols(const FlatSum& f);

/// AC-normal form: flattened, sorted, deduplicated sums without Nil
/// summands; sorted, deduplicated wait runs and exclusion lists.
Term canonicalize(const Term& t);

FlatSum wait_normal(const Term& t);

inline constexpr std::size_t kDefaultSummandBound = 10'000;

/// Every wait is expanded through the summands that fire it, until each wait
/// of a summand is accompanied by the full wait-set of one of its enablers.
/// Waits on events that no summand fires are left alone.
FlatSum expanded_wait_normal(const FlatSum& f, std::size_t bound = kDefaultSummandBound);

/// True iff no event is fired by two summands with subset-related wait-sets.
bool is_wae_normal(const FlatSum& f);

struct WaeResult {
  FlatSum term;
  std::set<EventId> silent;
};

/// Silent events are named `<event>#wae<k>`.
WaeResult wae_normal(const Term& t, std::size_t bound = kDefaultSummandBound);

/// Orders the wait-normal summands so that each waited event is fired by an
/// earlier summand; true iff every summand can be placed.
bool syntactic_deadlock_free(const Term& t);

}  // namespace pkgsem
