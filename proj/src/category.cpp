#include "pkgsem/category.hpp"

#include <algorithm>

#include "pkgsem/error.hpp"

namespace pkgsem {

namespace {

const Context kEmpty;

bool enabled_in(const EventStructure& g, const Context& ctx, const EventId& e) {
  if (!g.is_consistent(ctx)) return false;
  const auto& family = g.enablings(e);
  return std::any_of(family.begin(), family.end(), [&](const Context& c) { return is_subset(c, ctx); });
}

// Stops at the first violation when `out` is null.
bool scan(const RelationalMorphism& m, std::vector<std::string>* out) {
  bool ok = true;
  std::map<EventId, std::vector<EventId>> pre;
  for (const auto& [x, img] : m.map) {
    for (const auto& t : img) pre[t].push_back(x);
  }

  // (i): a consistent selection of preimages covering a target conflict.
  for (const auto& k : m.target.conflicts()) {
    std::vector<const std::vector<EventId>*> choices;
    bool reachable = true;
    for (const auto& t : k) {
      auto it = pre.find(t);
      if (it == pre.end()) {
        reachable = false;
        break;
      }
      choices.push_back(&it->second);
    }
    if (!reachable) continue;
    std::set<Context> frontier{Context{}};
    for (const auto* c : choices) {
      std::set<Context> next;
      for (const auto& sel : frontier) {
        for (const auto& x : *c) {
          Context s = sel;
          s.insert(x);
          if (m.source.is_consistent(s)) next.insert(std::move(s));
        }
      }
      frontier = std::move(next);
    }
    if (!frontier.empty()) {
      ok = false;
      if (!out) return false;
      out->push_back("(i) consistent " + render_context(*frontier.begin()) + " maps onto conflict " +
                     render_context(k));
    }
  }

  // (ii): each consistent minimal enabling is carried to an enabling.
  for (const auto& [e, family] : m.source.enabling_map()) {
    const Context& img_e = m(e);
    for (const auto& c : family) {
      if (!m.source.is_consistent(c)) continue;
      Context img = induced_powerset_map(m.map, c);
      for (const auto& t : img_e) {
        Context ctx = img;
        for (const auto& [dependent, dependency] : m.split_deps) {
          if (dependent == t && img_e.count(dependency)) ctx.insert(dependency);
        }
        if (enabled_in(m.target, ctx, t)) continue;
        ok = false;
        if (!out) return false;
        out->push_back("(ii) " + render_context(c) + " enables " + e + " but " + render_context(ctx) +
                       " does not enable " + t);
      }
    }
  }
  return ok;
}

bool private_elements(const std::map<EventId, Context>& r) {
  for (const auto& [x, img] : r) {
    bool found = false;
    for (const auto& t : img) {
      bool shared = false;
      for (const auto& [y, other] : r) {
        if (y != x && other.count(t)) {
          shared = true;
          break;
        }
      }
      if (!shared) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

std::vector<Context> subsets(const std::set<EventId>& events, std::size_t max_events) {
  if (events.size() > max_events) {
    throw Error(ErrorKind::SizeGuard, std::to_string(events.size()) + " events exceed the limit of " +
                                          std::to_string(max_events));
  }
  std::vector<EventId> v(events.begin(), events.end());
  std::vector<Context> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << v.size()); ++mask) {
    Context c;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (mask >> i & 1) c.insert(v[i]);
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

const Context& RelationalMorphism::operator()(const EventId& e) const {
  auto it = map.find(e);
  return it == map.end() ? kEmpty : it->second;
}

RelationalMorphism make_morphism(EventStructure source, EventStructure target, Relation map,
                                 SplitDeps split_deps) {
  for (const auto& [x, img] : map) {
    if (!source.contains(x)) throw Error(ErrorKind::UnknownEvent, "'" + x + "' is not a source event");
    for (const auto& t : img) {
      if (!target.contains(t)) throw Error(ErrorKind::UnknownEvent, "'" + t + "' is not a target event");
    }
  }
  for (const auto& e : source.events()) map[e];
  for (const auto& [dependent, dependency] : split_deps) {
    bool inside = std::any_of(map.begin(), map.end(), [&](const auto& kv) {
      return kv.second.count(dependent) && kv.second.count(dependency);
    });
    if (!inside || dependent == dependency) {
      throw Error(ErrorKind::Shape, "split dependency " + dependent + " <- " + dependency +
                                        " is not inside a single image");
    }
  }
  return {std::move(source), std::move(target), std::move(map), std::move(split_deps)};
}

std::vector<std::string> check_morphism(const RelationalMorphism& m) {
  std::vector<std::string> out;
  scan(m, &out);
  return out;
}

bool is_valid(const RelationalMorphism& m) { return scan(m, nullptr); }

Context induced_powerset_map(const Relation& r, const Context& x) {
  Context out;
  for (const auto& e : x) {
    auto it = r.find(e);
    if (it != r.end()) out.insert(it->second.begin(), it->second.end());
  }
  return out;
}

RelationalMorphism identity(const EventStructure& ges) {
  Relation r;
  for (const auto& e : ges.events()) r[e] = {e};
  return {ges, ges, std::move(r), {}};
}

RelationalMorphism compose(const RelationalMorphism& g, const RelationalMorphism& f) {
  if (!(f.target == g.source)) throw Error(ErrorKind::Shape, "morphisms do not compose: endpoints differ");
  Relation r;
  for (const auto& [x, img] : f.map) r[x] = induced_powerset_map(g.map, img);
  SplitDeps deps;
  auto keep = [&](const EventId& a, const EventId& b) {
    if (a == b) return;
    for (const auto& [x, img] : r) {
      if (img.count(a) && img.count(b)) {
        deps.insert({a, b});
        return;
      }
    }
  };
  for (const auto& [a, b] : g.split_deps) keep(a, b);
  for (const auto& [a, b] : f.split_deps) {
    for (const auto& ga : g(a)) {
      for (const auto& gb : g(b)) keep(ga, gb);
    }
  }
  return {f.source, g.target, std::move(r), std::move(deps)};
}

Relation transpose(const RelationalMorphism& m) {
  Relation t;
  for (const auto& e : m.target.events()) t[e];
  for (const auto& [x, img] : m.map) {
    for (const auto& e : img) t[e].insert(x);
  }
  return t;
}

bool is_mono(const RelationalMorphism& m) { return private_elements(m.map); }

bool is_epi(const RelationalMorphism& m) { return private_elements(transpose(m)); }

bool is_mono_brute_force(const RelationalMorphism& m, std::size_t max_events) {
  std::set<Context> images;
  auto all = subsets(m.source.events(), max_events);
  for (const auto& x : all) images.insert(induced_powerset_map(m.map, x));
  return images.size() == all.size();
}

bool is_metadata_map(const RelationalMorphism& m) {
  if (m.source.events() != m.target.events()) return false;
  for (const auto& [x, img] : m.map) {
    if (img != Context{x}) return false;
  }
  return is_valid(m);
}

EventStructure disc(const EventStructure& ges) {
  ContextFamily conflicts;
  for (const auto& e : ges.events()) conflicts.insert({e});
  return EventStructure(ges.events(), std::move(conflicts), {});
}

EventStructure codisc(const EventStructure& ges) {
  std::map<EventId, ContextFamily> en;
  for (const auto& e : ges.events()) en[e] = {{}};
  return EventStructure(ges.events(), {}, std::move(en));
}

Factorization factor_reflection(const RelationalMorphism& f) {
  if (!(f.target == codisc(f.target))) throw Error(ErrorKind::Shape, "target is not codiscrete");
  RelationalMorphism sharp = identity(f.source);
  sharp.target = codisc(f.source);
  return {std::move(sharp), {codisc(f.source), f.target, f.map, f.split_deps}};
}

Factorization factor_coreflection(const RelationalMorphism& f) {
  if (!(f.source == disc(f.source))) throw Error(ErrorKind::Shape, "source is not discrete");
  RelationalMorphism flat = identity(f.target);
  flat.source = disc(f.target);
  return {{f.source, disc(f.target), f.map, f.split_deps}, std::move(flat)};
}

Factorization factor_metadata(const RelationalMorphism& f, std::size_t max_events) {
  const auto& b = f.target;
  std::vector<Context> images;
  for (const auto& y : subsets(f.source.events(), max_events)) {
    if (f.source.is_consistent(y)) images.push_back(induced_powerset_map(f.map, y));
  }
  ContextFamily conflicts;
  for (const auto& z : subsets(b.events(), max_events)) {
    bool covered = std::any_of(images.begin(), images.end(), [&](const Context& i) { return is_subset(z, i); });
    if (!covered) conflicts.insert(z);
  }
  std::map<EventId, ContextFamily> en;
  for (const auto& [e, family] : f.source.enabling_map()) {
    for (const auto& c : family) {
      if (!f.source.is_consistent(c)) continue;
      Context img = induced_powerset_map(f.map, c);
      for (const auto& t : f(e)) {
        Context ctx = img;
        for (const auto& [dependent, dependency] : f.split_deps) {
          if (dependent == t && f(e).count(dependency)) ctx.insert(dependency);
        }
        en[t].insert(std::move(ctx));
      }
    }
  }
  auto x = EventStructure::minimized(b.events(), std::move(conflicts), std::move(en));
  RelationalMorphism meta = identity(b);
  meta.source = x;
  return {{f.source, std::move(x), f.map, f.split_deps}, std::move(meta)};
}

SplitMonoResult is_split_mono(const RelationalMorphism& m, std::size_t max_candidates) {
  SplitMonoResult out;
  if (!is_valid(m)) return out;
  std::map<EventId, std::vector<EventId>> pre;
  for (const auto& [x, img] : m.map) {
    if (img.empty()) return out;
    for (const auto& t : img) pre[t].push_back(x);
  }
  // Images must not overlap; candidate images per target event.
  std::vector<EventId> targets(m.target.events().begin(), m.target.events().end());
  std::vector<std::vector<Context>> options;
  std::size_t total = 1;
  for (const auto& t : targets) {
    std::vector<Context> opts;
    auto it = pre.find(t);
    if (it == pre.end()) {
      opts = subsets(m.source.events(), 20);
    } else if (it->second.size() == 1) {
      opts = {Context{}, Context{it->second[0]}};
    } else {
      return out;
    }
    total *= opts.size();
    if (total > max_candidates) {
      throw Error(ErrorKind::SizeGuard, "retract search exceeds " + std::to_string(max_candidates) + " candidates");
    }
    options.push_back(std::move(opts));
  }
  std::vector<std::size_t> pick(targets.size(), 0);
  for (;;) {
    Relation r;
    for (std::size_t i = 0; i < targets.size(); ++i) r[targets[i]] = options[i][pick[i]];
    bool retracts = std::all_of(m.map.begin(), m.map.end(), [&](const auto& kv) {
      return induced_powerset_map(r, kv.second) == Context{kv.first};
    });
    if (retracts) {
      RelationalMorphism cand{m.target, m.source, std::move(r), {}};
      if (is_valid(cand)) {
        out.split = true;
        out.retract = std::move(cand);
        return out;
      }
    }
    std::size_t i = 0;
    while (i < pick.size() && ++pick[i] == options[i].size()) pick[i++] = 0;
    if (i == pick.size()) return out;
  }
}

const char* to_string(SplitKind k) {
  switch (k) {
    case SplitKind::Extension: return "extension";
    case SplitKind::Splitting: return "splitting";
    case SplitKind::Neither: return "neither";
  }
  return "neither";
}

SplitKind classify_minimal_split_mono(const RelationalMorphism& m) {
  if (m.target.events().size() != m.source.events().size() + 1) return SplitKind::Neither;
  if (!is_split_mono(m).split) return SplitKind::Neither;
  const EventId* doubled = nullptr;
  for (const auto& [x, img] : m.map) {
    if (img.size() == 2) {
      if (doubled) return SplitKind::Neither;
      doubled = &x;
    } else if (img.size() != 1) {
      return SplitKind::Neither;
    }
  }
  if (!doubled) return SplitKind::Extension;

  // Both halves must carry the original's metadata, up to their mutual dependency.
  const Context& halves = m(*doubled);
  const EventId& p = *halves.begin();
  const EventId& q = *halves.rbegin();
  auto strip = [&](const EventId& e) {
    ContextFamily out;
    for (auto c : m.target.enablings(e)) {
      c.erase(p);
      c.erase(q);
      out.insert(std::move(c));
    }
    return minimize(out);
  };
  if (strip(p) != strip(q)) return SplitKind::Neither;
  auto swap = [&](Context c) {
    bool hp = c.erase(p), hq = c.erase(q);
    if (hp) c.insert(q);
    if (hq) c.insert(p);
    return c;
  };
  for (const auto& k : m.target.conflicts()) {
    if (k.count(p) && k.count(q)) return SplitKind::Neither;
    if (!m.target.conflicts().count(swap(k))) return SplitKind::Neither;
  }
  return SplitKind::Splitting;
}

}  // namespace pkgsem
