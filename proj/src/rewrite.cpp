#include "pkgsem/rewrite.hpp"

#include <algorithm>
#include <map>

#include "pkgsem/error.hpp"

namespace pkgsem {

namespace {

void decompose(const Term& t, const Context& waits, std::vector<NormalSummand>& out) {
  switch (t.kind()) {
    case Term::Kind::Nil: return;
    case Term::Kind::Par:
      for (const auto& s : t.summands()) decompose(s, waits, out);
      return;
    case Term::Kind::Wait: {
      Context w = waits;
      w.insert(t.event());
      decompose(t.cont(), w, out);
      return;
    }
    case Term::Kind::Fire: {
      out.push_back({waits, t.event(), Context(t.exclusions().begin(), t.exclusions().end())});
      Context w = waits;
      w.insert(t.event());
      decompose(t.cont(), w, out);
      return;
    }
  }
}

bool strict_subset(const Context& a, const Context& b) {
  return a.size() < b.size() && is_subset(a, b);
}

// Drops summands that can never fire for the first time (waiting on the stop
// event or on their own event), removes duplicates, and absorbs a summand
// into one with the same firing and a smaller wait-set.
FlatSum tidy(std::vector<NormalSummand> raw) {
  std::set<NormalSummand> kept;
  for (auto& s : raw) {
    if (s.waits.count(kStopEvent) || s.waits.count(s.fire)) continue;
    kept.insert(std::move(s));
  }
  FlatSum out;
  for (const auto& s : kept) {
    bool absorbed = std::any_of(kept.begin(), kept.end(), [&](const NormalSummand& o) {
      return o.fire == s.fire && o.exclusions == s.exclusions && strict_subset(o.waits, s.waits);
    });
    if (!absorbed) out.push_back(s);
  }
  return out;
}

std::multimap<EventId, const NormalSummand*> enablers_of(const FlatSum& f) {
  std::multimap<EventId, const NormalSummand*> out;
  for (const auto& s : f) out.emplace(s.fire, &s);
  return out;
}

void flatten_canonical(const Term& t, std::vector<Term>& out) {
  Term c = canonicalize(t);
  if (c.is_nil()) return;
  if (c.kind() == Term::Kind::Par) {
    for (const auto& s : c.summands()) out.push_back(s);
  } else {
    out.push_back(std::move(c));
  }
}

}  // namespace

Term to_term(const NormalSummand& s) {
  Term t = Term::fire(s.fire, std::vector<EventId>(s.exclusions.begin(), s.exclusions.end()));
  for (auto it = s.waits.rbegin(); it != s.waits.rend(); ++it) t = Term::wait(*it, std::move(t));
  return t;
}

Term to_term(const FlatSum& f) {
  std::vector<Term> parts;
  for (const auto& s : f) parts.push_back(to_term(s));
  return Term::par(std::move(parts));
}

FlatSum as_flat_sum(const Term& t) {
  std::vector<const Term*> parts;
  if (t.kind() == Term::Kind::Par) {
    for (const auto& s : t.summands()) parts.push_back(&s);
  } else if (!t.is_nil()) {
    parts.push_back(&t);
  }
  std::set<NormalSummand> out;
  for (const Term* p : parts) {
    NormalSummand s;
    const Term* at = p;
    while (at->kind() == Term::Kind::Wait) {
      s.waits.insert(at->event());
      at = &at->cont();
    }
    if (at->kind() != Term::Kind::Fire || !at->cont().is_nil()) {
      throw Error(ErrorKind::Shape, "'" + to_string(*p) + "' is not a wait-set followed by a firing");
    }
    s.fire = at->event();
    s.exclusions = Context(at->exclusions().begin(), at->exclusions().end());
    if (s.waits.count(kStopEvent)) continue;
    out.insert(std::move(s));
  }
  return FlatSum(out.begin(), out.end());
}

std::string to_string(const FlatSum& f) { return to_string(to_term(f)); }

std::set<EventId> symbols(const FlatSum& f) {
  std::set<EventId> out;
  for (const auto& s : f) {
    out.insert(s.waits.begin(), s.waits.end());
    out.insert(s.fire);
    out.insert(s.exclusions.begin(), s.exclusions.end());
  }
  out.erase(kStopEvent);
  return out;
}

Term canonicalize(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Nil: return t;
    case Term::Kind::Fire: {
      std::set<EventId> x(t.exclusions().begin(), t.exclusions().end());
      return Term::fire(t.event(), std::vector<EventId>(x.begin(), x.end()), canonicalize(t.cont()));
    }
    case Term::Kind::Wait: {
      std::set<EventId> run;
      const Term* at = &t;
      while (at->kind() == Term::Kind::Wait) {
        run.insert(at->event());
        at = &at->cont();
      }
      Term body = canonicalize(*at);
      if (body.is_nil()) return body;
      for (auto it = run.rbegin(); it != run.rend(); ++it) body = Term::wait(*it, std::move(body));
      return body;
    }
    case Term::Kind::Par: {
      std::vector<Term> parts;
      for (const auto& s : t.summands()) flatten_canonical(s, parts);
      std::sort(parts.begin(), parts.end());
      parts.erase(std::unique(parts.begin(), parts.end()), parts.end());
      return Term::par(std::move(parts));
    }
  }
  return t;
}

FlatSum wait_normal(const Term& t) {
  std::vector<NormalSummand> raw;
  decompose(t, {}, raw);
  return tidy(std::move(raw));
}

FlatSum expanded_wait_normal(const FlatSum& input, std::size_t bound) {
  FlatSum f = tidy(input);
  for (std::size_t round = 0;; ++round) {
    if (round > bound) throw Error(ErrorKind::ExpansionBound, "wait expansion did not converge");
    auto enablers = enablers_of(f);
    std::vector<NormalSummand> next;
    bool changed = false;
    for (const auto& s : f) {
      // Waits on events no summand fires are inputs from outside; left as is.
      const EventId* open = nullptr;
      for (const auto& w : s.waits) {
        auto [lo, hi] = enablers.equal_range(w);
        if (lo == hi) continue;
        bool covered = std::any_of(lo, hi, [&](const auto& kv) { return is_subset(kv.second->waits, s.waits); });
        if (!covered) {
          open = &w;
          break;
        }
      }
      if (!open) {
        next.push_back(s);
        continue;
      }
      changed = true;
      auto [lo, hi] = enablers.equal_range(*open);
      for (auto it = lo; it != hi; ++it) {
        NormalSummand copy = s;
        copy.waits.insert(it->second->waits.begin(), it->second->waits.end());
        next.push_back(std::move(copy));
      }
      if (next.size() > bound) {
        throw Error(ErrorKind::ExpansionBound,
                    "wait expansion exceeds " + std::to_string(bound) + " summands");
      }
    }
    if (!changed) return f;
    f = tidy(std::move(next));
  }
}

bool is_wae_normal(const FlatSum& f) {
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i].waits.count(f[i].fire) || f[i].exclusions.count(f[i].fire)) return false;
    for (std::size_t j = 0; j < f.size(); ++j) {
      if (i != j && f[i].fire == f[j].fire && is_subset(f[i].waits, f[j].waits)) return false;
    }
  }
  return true;
}

WaeResult wae_normal(const Term& t, std::size_t bound) {
  FlatSum f = expanded_wait_normal(wait_normal(t), bound);
  std::set<EventId> taken = symbols(t);
  auto more = symbols(f);
  taken.insert(more.begin(), more.end());

  std::map<EventId, std::vector<const NormalSummand*>> groups;
  for (const auto& s : f) groups[s.fire].push_back(&s);

  WaeResult out;
  std::set<NormalSummand> result;
  std::size_t counter = 0;
  for (const auto& [e, group] : groups) {
    bool clash = false;
    for (const auto* a : group) {
      for (const auto* b : group) {
        clash = clash || (a != b && is_subset(a->waits, b->waits));
      }
    }
    if (!clash) {
      for (const auto* s : group) result.insert(*s);
      continue;
    }
    for (const auto* s : group) {
      EventId silent = e + "#wae" + std::to_string(++counter);
      if (taken.count(silent)) {
        throw Error(ErrorKind::NameCollision, "silent event name '" + silent + "' is already in use");
      }
      out.silent.insert(silent);
      result.insert({s->waits, silent, s->exclusions});
      result.insert({{silent}, e, {}});
    }
  }
  out.term.assign(result.begin(), result.end());
  return out;
}

bool syntactic_deadlock_free(const Term& t) {
  // Summands that can never fire stay in: they are exactly what deadlocks.
  std::vector<NormalSummand> f;
  decompose(t, {}, f);
  f.erase(std::remove_if(f.begin(), f.end(),
                         [](const NormalSummand& s) { return s.waits.count(kStopEvent) != 0; }),
          f.end());
  std::set<EventId> fired;
  std::vector<bool> placed(f.size(), false);
  std::size_t remaining = f.size();
  bool progress = true;
  while (remaining && progress) {
    progress = false;
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (placed[i] || !is_subset(f[i].waits, fired)) continue;
      placed[i] = true;
      --remaining;
      fired.insert(f[i].fire);
      progress = true;
    }
  }
  return remaining == 0;
}

}  // namespace pkgsem
