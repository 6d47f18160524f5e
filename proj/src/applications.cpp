#include "pkgsem/applications.hpp"

#include <algorithm>

#include "pkgsem/correspondence.hpp"
#include "pkgsem/error.hpp"
#include "pkgsem/rewrite.hpp"

namespace pkgsem {

namespace {

void require_event(const EventStructure& ges, const EventId& e) {
  if (!ges.contains(e)) throw Error(ErrorKind::UnknownEvent, "'" + e + "' is not an event");
}

Context substitute(Context c, const EventId& p, const EventId& q) {
  if (c.erase(p)) c.insert(q);
  return c;
}

bool enabled(const EventStructure& g, const Context& c, const EventId& a) {
  if (!g.is_consistent(c)) return false;
  const auto& family = g.enablings(a);
  return std::any_of(family.begin(), family.end(), [&](const Context& x) { return is_subset(x, c); });
}

EventStructure quotient_one(const EventStructure& ges, const EventId& p, const EventId& q) {
  if (p == q) return ges;
  std::set<EventId> events = ges.events();
  events.erase(p);
  ContextFamily conflicts;
  for (const auto& k : ges.conflicts()) {
    if (k.count(p) && k.count(q)) continue;
    conflicts.insert(substitute(k, p, q));
  }
  std::map<EventId, ContextFamily> en;
  for (const auto& [a, family] : ges.enabling_map()) {
    if (a == p) continue;
    for (const auto& c : family) en[a].insert(substitute(c, p, q));
  }
  return EventStructure::minimized(std::move(events), std::move(conflicts), std::move(en));
}

}  // namespace

bool is_version_related(const EventStructure& ges, const EventId& p, const EventId& q) {
  require_event(ges, p);
  require_event(ges, q);
  if (p == q) return true;
  for (const auto& k : ges.conflicts()) {
    if (k.count(p) || !k.count(q)) continue;
    Context c = k;
    c.erase(q);
    c.insert(p);
    if (ges.is_consistent(c)) return false;
  }
  for (const auto& [a, family] : ges.enabling_map()) {
    for (const auto& en : family) {
      if (a == p) {
        if (ges.is_consistent(en) && !enabled(ges, substitute(en, p, q), q)) return false;
        continue;
      }
      Context c = en;
      c.insert(p);
      if (!ges.is_consistent(c)) continue;
      if (!enabled(ges, substitute(c, p, q), a)) return false;
    }
  }
  return true;
}

EventStructure quotient_versions(const EventStructure& ges, const VersionPairs& pairs) {
  EventStructure out = ges;
  for (const auto& [p, q] : pairs) {
    if (!is_version_related(out, p, q)) {
      throw Error(ErrorKind::NotVersionRelated, p + " is not a lower version of " + q);
    }
    out = quotient_one(out, p, q);
  }
  return out;
}

VersionFactorization version_endomorphism(const EventStructure& ges, const EventId& p, const EventId& q) {
  EventStructure quot = quotient_versions(ges, {{p, q}});
  Relation merge, inject;
  for (const auto& e : ges.events()) merge[e] = {e == p ? q : e};
  for (const auto& e : quot.events()) inject[e] = {e};
  RelationalMorphism m{ges, quot, std::move(merge), {}};
  RelationalMorphism i{quot, ges, std::move(inject), {}};
  return {std::move(quot), std::move(m), std::move(i)};
}

VersionPairs version_pairs(const RepositoryManifest& m) {
  VersionPairs out;
  EventStructure g = to_event_structure(m);
  std::set<std::string> names;
  for (const auto& d : m.packages) names.insert(d.name);
  for (const auto& name : names) {
    auto versions = m.versions_of(name);
    const EventId top = versions.back()->id();
    for (std::size_t i = 0; i + 1 < versions.size(); ++i) {
      const EventId p = versions[i]->id();
      if (!is_version_related(g, p, top)) continue;
      out.push_back({p, top});
      g = quotient_one(g, p, top);
    }
  }
  return out;
}

RepositoryManifest quotient_manifest(const RepositoryManifest& m, const VersionPairs& pairs) {
  RepositoryManifest out = m;
  for (const auto& [p, q] : pairs) {
    const PackageDecl* lo = out.find(p);
    const PackageDecl* hi = out.find(q);
    if (!lo || !hi) throw Error(ErrorKind::UnknownEvent, "'" + (lo ? q : p) + "' is not a declared package");
    if (lo->name != hi->name || !is_version_related(to_event_structure(out), p, q)) {
      throw Error(ErrorKind::NotVersionRelated, p + " is not a lower version of " + q);
    }
    const std::string name = lo->name;
    const Version low = lo->version, high = hi->version;
    std::vector<PackageDecl> kept;
    for (auto& d : out.packages) {
      if (d.id() == p) continue;
      auto it = d.dependencies.find(name);
      if (it != d.dependencies.end() && it->second.matches(low) && !it->second.matches(high)) {
        it->second = VersionConstraint::any_of({it->second, VersionConstraint::exact(high)});
      }
      kept.push_back(std::move(d));
    }
    out.packages = std::move(kept);
  }
  return out;
}

std::optional<BuildPlan> solve(const EventStructure& ges, const EventId& target, std::size_t state_cap) {
  require_event(ges, target);
  std::map<Context, std::vector<EventId>> layer{{Context{}, {}}};
  std::size_t explored = 0;
  while (!layer.empty()) {
    explored += layer.size();
    if (explored > state_cap) {
      throw Error(ErrorKind::StateCap, "solver explored more than " + std::to_string(state_cap) + " configurations");
    }
    const std::vector<EventId>* best = nullptr;
    for (const auto& [c, order] : layer) {
      if (c.count(target) && (!best || order < *best)) best = &order;
    }
    if (best) return BuildPlan{target, *best};
    std::map<Context, std::vector<EventId>> next;
    for (const auto& [c, order] : layer) {
      for (const auto& e : ges.enabled_events(c)) {
        Context d = c;
        d.insert(e);
        auto cand = order;
        cand.push_back(e);
        auto it = next.find(d);
        if (it == next.end()) {
          next.emplace(std::move(d), std::move(cand));
        } else if (cand < it->second) {
          it->second = std::move(cand);
        }
      }
    }
    layer = std::move(next);
  }
  return std::nullopt;
}

bool solve_oracle(const EventStructure& ges, const EventId& target, std::size_t max_events) {
  require_event(ges, target);
  if (ges.events().size() > max_events) {
    throw Error(ErrorKind::SizeGuard, "oracle limited to " + std::to_string(max_events) + " events");
  }
  auto configs = ges.configurations();
  return std::any_of(configs.begin(), configs.end(), [&](const Context& c) { return c.count(target) != 0; });
}

bool solve_wae(const EventStructure& ges, const EventId& target) {
  require_event(ges, target);
  auto w = wae_normal(encode(ges).term);
  std::map<EventId, EventId> real;
  for (const auto& s : w.term) {
    if (s.waits.size() == 1 && w.silent.count(*s.waits.begin())) real[*s.waits.begin()] = s.fire;
  }
  auto real_of = [&](const EventId& e) {
    auto it = real.find(e);
    return it == real.end() ? e : it->second;
  };
  std::map<EventId, Context> excl;
  std::set<EventId> fired;
  for (const auto& s : w.term) {
    EventId e = real_of(s.fire);
    fired.insert(e);
    excl[e].insert(s.exclusions.begin(), s.exclusions.end());
  }
  std::vector<Context> candidates;
  for (const auto& s : w.term) {
    if (s.fire == target) {
      if (s.waits.size() == 1 && w.silent.count(*s.waits.begin())) continue;
      candidates.push_back(s.waits);
    } else if (w.silent.count(s.fire) && real_of(s.fire) == target) {
      candidates.push_back(s.waits);
    }
  }
  auto clash = [&](const EventId& x, const EventId& y) { return excl[x].count(y) || excl[y].count(x); };
  for (auto u : candidates) {
    bool grounded = std::all_of(u.begin(), u.end(), [&](const EventId& e) { return fired.count(e) != 0; });
    if (!grounded) continue;
    u.insert(target);
    bool ok = true;
    for (auto i = u.begin(); ok && i != u.end(); ++i) {
      for (auto j = std::next(i); ok && j != u.end(); ++j) ok = !clash(*i, *j);
    }
    if (ok) return true;
  }
  return false;
}

const char* to_string(ConflictModel m) {
  switch (m) {
    case ConflictModel::Strict: return "strict";
    case ConflictModel::Vendored: return "vendored";
    case ConflictModel::LastWins: return "last-wins";
    case ConflictModel::Mangled: return "mangled";
  }
  return "strict";
}

ConflictModel parse_conflict_model(std::string_view name) {
  for (auto m : {ConflictModel::Strict, ConflictModel::Vendored, ConflictModel::LastWins, ConflictModel::Mangled}) {
    if (name == to_string(m)) return m;
  }
  throw Error(ErrorKind::Syntax, "unknown conflict model '" + std::string(name) + "'");
}

namespace {

struct Runner {
  const RepositoryManifest& repo;
  ConflictModel model;
  ModelRun run;
  std::map<std::string, EventId> scope;
  std::vector<EventId> loaded;
  bool failed = false;

  const PackageDecl& pick(const std::string& name, const VersionConstraint& c) {
    auto options = resolve_constraint(repo, name, c);
    auto versions = repo.versions_of(name);
    for (auto it = versions.rbegin(); it != versions.rend(); ++it) {
      if (options.count((*it)->id())) return **it;
    }
    throw Error(ErrorKind::Closure, "no version of " + name + " satisfies " + to_string(c));
  }

  std::string install(const PackageDecl& d) {
    auto here = scope.find(d.name);
    if (here != scope.end() && here->second == d.id()) return d.id();
    std::vector<std::string> mangled;
    for (const auto& [name, c] : d.dependencies) {
      auto in = scope.find(name);
      if (in != scope.end() && c.matches(repo.find(in->second)->version)) continue;
      std::string b = install(pick(name, c));
      if (failed) return {};
      if (b.rfind("mangle(", 0) == 0) mangled.push_back(b);
    }
    std::string rendered = d.id(), binding = d.id();
    here = scope.find(d.name);
    if (here == scope.end()) {
      scope[d.name] = d.id();
      loaded.push_back(d.id());
    } else {
      switch (model) {
        case ConflictModel::Strict:
          failed = true;
          run.failure = d.id() + " conflicts with " + here->second;
          return {};
        case ConflictModel::Vendored:
          rendered = d.id() + "@" + here->second;
          break;
        case ConflictModel::LastWins:
          loaded.erase(std::find(loaded.begin(), loaded.end(), here->second));
          loaded.push_back(d.id());
          here->second = d.id();
          break;
        case ConflictModel::Mangled:
          rendered = binding = "mangle(" + d.id() + ")";
          break;
      }
    }
    for (std::size_t i = 0; i < mangled.size(); ++i) rendered += (i ? "," : "@") + mangled[i];
    run.trace.push_back(rendered);
    run.history.push_back(d.id());
    return binding;
  }
};

}  // namespace

ModelRun run_conflict_model(const RepositoryManifest& repo, const std::vector<EventId>& requests,
                            ConflictModel model) {
  for (const auto& r : requests) {
    if (!repo.find(r)) throw Error(ErrorKind::UnknownEvent, "'" + r + "' is not a declared package");
  }
  Runner runner{repo, model, {}, {}, {}};
  for (const auto& r : requests) {
    runner.install(*repo.find(r));
    if (runner.failed) {
      runner.run.failure = r + ": " + *runner.run.failure;
      break;
    }
  }
  if (model == ConflictModel::LastWins) {
    runner.run.trace = runner.loaded;
  } else {
    runner.run.history.clear();
  }
  return std::move(runner.run);
}

std::string render(const ModelRun& run, ConflictModel model) {
  std::string out;
  for (const auto& e : run.trace) out += e + "\n";
  if (model == ConflictModel::LastWins) {
    out += "history:";
    for (const auto& e : run.history) out += " " + e;
    out += "\n";
  }
  return out;
}

}  // namespace pkgsem
