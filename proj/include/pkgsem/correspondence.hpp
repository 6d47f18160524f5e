#pragma once

#include <set>

#include "pkgsem/cep.hpp"
#include "pkgsem/event_structure.hpp"
#include "pkgsem/rewrite.hpp"

namespace pkgsem {

/// |P| for a wae-normal flat sum. `extra_events` adds symbols that no summand
/// mentions (e.g. stopped `0.e` processes). Throws Error(NotWaeNormal).
EventStructure denote(const FlatSum& f, const std::set<EventId>& extra_events = {});
inline EventStructure denote(const WaeResult& w) { return denote(w.term); }

struct Encoding {
  Term term;
  /// Choice events introduced for conflicts of three or more events.
  std::set<EventId> virtual_events;
};

/// One summand per event and minimal enabling context; binary conflicts
/// become mutual exclusions, larger ones go through `conf#<k>` choice events.
/// Events that can never fire appear as `0.e`.
Encoding encode(const EventStructure& ges);

/// configurations(ges) equals the fired sets of encode(ges) with virtual
/// events erased.
bool roundtrip_check(const EventStructure& ges, std::size_t state_cap = kDefaultStateCap);

}  // namespace pkgsem
