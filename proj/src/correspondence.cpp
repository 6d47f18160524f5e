#include "pkgsem/correspondence.hpp"

#include <algorithm>
#include <map>

#include "pkgsem/error.hpp"

namespace pkgsem {

EventStructure denote(const FlatSum& f, const std::set<EventId>& extra_events) {
  if (!is_wae_normal(f)) {
    throw Error(ErrorKind::NotWaeNormal, "'" + to_string(f) + "' is not wae-normal");
  }
  std::set<EventId> events = symbols(f);
  events.insert(extra_events.begin(), extra_events.end());

  ContextFamily conflicts;
  for (const auto& s : f) {
    for (const auto& x : s.exclusions) {
      Context k = s.waits;
      k.insert(s.fire);
      k.insert(x);
      conflicts.insert(std::move(k));
    }
  }
  conflicts = minimize(conflicts);

  std::map<EventId, ContextFamily> enablings;
  for (const auto& s : f) {
    bool consistent = std::none_of(conflicts.begin(), conflicts.end(),
                                   [&](const Context& k) { return is_subset(k, s.waits); });
    if (consistent) enablings[s.fire].insert(s.waits);
  }
  return EventStructure::minimized(std::move(events), std::move(conflicts), std::move(enablings));
}

Encoding encode(const EventStructure& ges) {
  Encoding out;
  std::map<EventId, Context> partners;
  std::set<EventId> dead;
  // For each event, one list of alternative choice events per larger conflict.
  std::map<EventId, std::vector<std::vector<EventId>>> choices;
  std::vector<Term> parts;

  std::size_t counter = 0;
  for (const auto& k : ges.conflicts()) {
    if (k.size() == 1) {
      dead.insert(*k.begin());
    } else if (k.size() == 2) {
      partners[*k.begin()].insert(*k.rbegin());
      partners[*k.rbegin()].insert(*k.begin());
    } else {
      std::vector<EventId> members(k.begin(), k.end());
      std::vector<EventId> virt;
      for (std::size_t i = 0; i < members.size(); ++i) {
        EventId v = "conf#" + std::to_string(++counter);
        if (ges.contains(v)) {
          throw Error(ErrorKind::NameCollision, "virtual event name '" + v + "' is already in use");
        }
        virt.push_back(v);
        out.virtual_events.insert(v);
      }
      for (std::size_t i = 0; i < virt.size(); ++i) {
        std::vector<EventId> others;
        for (std::size_t j = 0; j < virt.size(); ++j) {
          if (j != i) others.push_back(virt[j]);
        }
        parts.push_back(Term::fire(virt[i], others));
      }
      // virt[i] stands for the members other than members[i].
      for (std::size_t j = 0; j < members.size(); ++j) {
        std::vector<EventId> alt;
        for (std::size_t i = 0; i < virt.size(); ++i) {
          if (i != j) alt.push_back(virt[i]);
        }
        choices[members[j]].push_back(std::move(alt));
      }
    }
  }

  for (const auto& e : ges.events()) {
    const auto& family = ges.enablings(e);
    if (dead.count(e) || family.empty()) {
      parts.push_back(Term::stop(Term::fire(e)));
      continue;
    }
    std::vector<Context> picks{Context{}};
    for (const auto& alt : choices[e]) {
      std::vector<Context> next;
      for (const auto& p : picks) {
        for (const auto& v : alt) {
          Context q = p;
          q.insert(v);
          next.push_back(std::move(q));
        }
      }
      picks = std::move(next);
    }
    for (const auto& c : family) {
      for (const auto& p : picks) {
        NormalSummand s{c, e, partners[e]};
        s.waits.insert(p.begin(), p.end());
        parts.push_back(to_term(s));
      }
    }
  }
  out.term = canonicalize(Term::par(std::move(parts)));
  return out;
}

bool roundtrip_check(const EventStructure& ges, std::size_t state_cap) {
  auto enc = encode(ges);
  std::set<Context> reached;
  for (auto s : fired_sets(enc.term, state_cap)) {
    for (const auto& v : enc.virtual_events) s.erase(v);
    reached.insert(std::move(s));
  }
  return reached == ges.configurations();
}

}  // namespace pkgsem
