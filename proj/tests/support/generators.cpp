#include "generators.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pkgsem::testing {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fixture(const std::string& name) { return read_file(std::string(PKGSEM_FIXTURES) + "/" + name); }

namespace {

int pick(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

EventId letter(int i) { return std::string(1, static_cast<char>('a' + i)); }

Term gen(Rng& rng, int events, int depth, bool exclusions) {
  int r = pick(rng, 0, depth <= 0 ? 3 : 9);
  if (r == 0) return Term::nil();
  EventId e = letter(pick(rng, 0, events - 1));
  Term cont = depth <= 0 ? Term::nil() : gen(rng, events, depth - 1, exclusions);
  if (r <= 3 || r == 6) {
    std::vector<EventId> excl;
    if (exclusions && pick(rng, 0, 2) == 0) {
      for (int i = 0; i < events; ++i) {
        if (letter(i) != e && pick(rng, 0, 3) == 0) excl.push_back(letter(i));
      }
    }
    return Term::fire(e, excl, depth <= 0 || r <= 2 ? Term::nil() : cont);
  }
  if (r <= 5 || r == 7) return Term::wait(e, cont);
  std::vector<Term> parts;
  int n = pick(rng, 2, 3);
  for (int i = 0; i < n; ++i) parts.push_back(gen(rng, events, depth - 1, exclusions));
  return Term::par(std::move(parts));
}

}  // namespace

Term random_term(Rng& rng, int events, int depth) { return gen(rng, events, depth, true); }

Term random_plain_term(Rng& rng, int events, int depth) { return gen(rng, events, depth, false); }

EventStructure random_structure(Rng& rng, int events, int conflicts) {
  int n = pick(rng, 1, events);
  std::set<EventId> evs;
  for (int i = 0; i < n; ++i) evs.insert(letter(i));
  auto subsets = powerset(evs);
  ContextFamily ks;
  int k = pick(rng, 0, conflicts);
  for (int i = 0; i < k && n >= 2; ++i) {
    Context c;
    while (c.size() < 2) c = subsets[pick(rng, 0, static_cast<int>(subsets.size()) - 1)];
    ks.insert(c);
  }
  std::map<EventId, ContextFamily> en;
  for (const auto& e : evs) {
    int m = pick(rng, 0, 2);
    if (m == 0 && pick(rng, 0, 1)) m = 1;
    for (int j = 0; j < m; ++j) {
      Context c;
      for (const auto& x : evs) {
        if (x != e && pick(rng, 0, 2) == 0) c.insert(x);
      }
      en[e].insert(c);
    }
  }
  return EventStructure::minimized(std::move(evs), std::move(ks), std::move(en));
}

RepositoryManifest random_manifest(Rng& rng, int packages) {
  RepositoryManifest m;
  const std::vector<std::string> names = {"base", "text", "pad", "web"};
  int total = pick(rng, 1, packages);
  for (int i = 0; i < total; ++i) {
    PackageDecl p;
    p.name = names[pick(rng, 0, static_cast<int>(names.size()) - 1)];
    unsigned minor = 0;
    while (true) {
      p.version = Version{1, minor, true};
      if (!m.find(p.id())) break;
      ++minor;
    }
    std::set<std::string> seen;
    for (const auto& q : m.packages) {
      if (q.name == p.name || seen.count(q.name) || pick(rng, 0, 2) != 0) continue;
      seen.insert(q.name);
      std::vector<VersionConstraint> alts;
      for (const auto* v : m.versions_of(q.name)) {
        if (alts.empty() || pick(rng, 0, 1)) alts.push_back(VersionConstraint::exact(v->version));
      }
      p.dependencies[q.name] = VersionConstraint::any_of(std::move(alts));
    }
    m.packages.push_back(std::move(p));
  }
  return m;
}

std::vector<Context> powerset(const std::set<EventId>& events) {
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

}  // namespace pkgsem::testing
