#include <algorithm>
#include <sstream>

#include "pkgsem/category.hpp"
#include "pkgsem/error.hpp"

namespace pkgsem {

namespace {

struct Naming {
  std::map<EventId, EventId> left, right;
  std::set<EventId> left_only, right_only;
  std::set<EventId> events;
};

Naming name_apart(const EventStructure& a, const EventStructure& b, const Sharing& shared) {
  Naming n;
  std::set<EventId> seen_b;
  for (const auto& [x, y] : shared) {
    if (!a.contains(x)) throw Error(ErrorKind::UnknownEvent, "'" + x + "' is not an event of the left structure");
    if (!b.contains(y)) throw Error(ErrorKind::UnknownEvent, "'" + y + "' is not an event of the right structure");
    if (n.left.count(x) || !seen_b.insert(y).second) {
      throw Error(ErrorKind::Shape, "sharing of " + x + " and " + y + " is not injective");
    }
    n.left[x] = x;
    n.right[y] = x;
  }
  for (const auto& x : a.events()) {
    if (n.left.count(x)) continue;
    n.left[x] = "L:" + x;
    n.left_only.insert(n.left[x]);
  }
  for (const auto& y : b.events()) {
    if (n.right.count(y)) continue;
    n.right[y] = "R:" + y;
    n.right_only.insert(n.right[y]);
  }
  for (const auto& [k, v] : n.left) n.events.insert(v);
  for (const auto& [k, v] : n.right) n.events.insert(v);
  if (n.events.size() != a.events().size() + b.events().size() - shared.size()) {
    throw Error(ErrorKind::NameCollision, "tagged event names collide with shared names");
  }
  return n;
}

Context rename(const std::map<EventId, EventId>& r, const Context& c) {
  Context out;
  for (const auto& e : c) out.insert(r.at(e));
  return out;
}

RelationalMorphism injection(const EventStructure& from, const EventStructure& to,
                             const std::map<EventId, EventId>& r) {
  Relation m;
  for (const auto& [k, v] : r) m[k] = {v};
  return {from, to, std::move(m), {}};
}

void add_enablings(const EventStructure& g, const std::map<EventId, EventId>& r, bool only_consistent,
                   std::map<EventId, ContextFamily>& en) {
  for (const auto& [e, family] : g.enabling_map()) {
    auto& dst = en[r.at(e)];
    for (const auto& c : family) {
      if (!only_consistent || g.is_consistent(c)) dst.insert(rename(r, c));
    }
  }
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

Cospan pushout_shared_names(const EventStructure& a, const EventStructure& b, const Sharing& shared) {
  Naming n = name_apart(a, b, shared);
  // A context is inconsistent when it fails on both legs; each failure is
  // witnessed by an event from the other side only or by a renamed conflict.
  std::vector<Context> not_left, not_right;
  for (const auto& e : n.right_only) not_left.push_back({e});
  for (const auto& k : a.conflicts()) not_left.push_back(rename(n.left, k));
  for (const auto& e : n.left_only) not_right.push_back({e});
  for (const auto& k : b.conflicts()) not_right.push_back(rename(n.right, k));
  ContextFamily conflicts;
  for (const auto& x : not_left) {
    for (const auto& y : not_right) {
      Context k = x;
      k.insert(y.begin(), y.end());
      conflicts.insert(std::move(k));
    }
  }
  std::map<EventId, ContextFamily> en;
  add_enablings(a, n.left, true, en);
  add_enablings(b, n.right, true, en);
  auto object = EventStructure::minimized(n.events, std::move(conflicts), std::move(en));
  auto left = injection(a, object, n.left);
  auto right = injection(b, object, n.right);
  return {std::move(object), std::move(left), std::move(right)};
}

Cospan coproduct(const EventStructure& a, const EventStructure& b) { return pushout_shared_names(a, b, {}); }

Cospan glue_shared_names(const EventStructure& a, const EventStructure& b, const Sharing& shared) {
  Naming n = name_apart(a, b, shared);
  ContextFamily conflicts;
  for (const auto& k : a.conflicts()) conflicts.insert(rename(n.left, k));
  for (const auto& k : b.conflicts()) conflicts.insert(rename(n.right, k));
  std::map<EventId, ContextFamily> en;
  add_enablings(a, n.left, false, en);
  add_enablings(b, n.right, false, en);
  auto object = EventStructure::minimized(n.events, std::move(conflicts), std::move(en));
  auto left = injection(a, object, n.left);
  auto right = injection(b, object, n.right);
  return {std::move(object), std::move(left), std::move(right)};
}

Span product(const EventStructure& a, const EventStructure& b) {
  Naming n = name_apart(a, b, {});
  auto glued = glue_shared_names(a, b, {});
  auto project = [&](const EventStructure& to, const std::map<EventId, EventId>& r) {
    Relation m;
    for (const auto& e : glued.object.events()) m[e];
    for (const auto& [k, v] : r) m[v] = {k};
    return RelationalMorphism{glued.object, to, std::move(m), {}};
  };
  auto left = project(a, n.left);
  auto right = project(b, n.right);
  return {std::move(glued.object), std::move(left), std::move(right)};
}

std::vector<RelationalMorphism> enumerate_morphisms(const EventStructure& a, const EventStructure& b,
                                                    std::size_t max_relations) {
  std::vector<std::pair<EventId, EventId>> cells;
  for (const auto& x : a.events()) {
    for (const auto& y : b.events()) cells.push_back({x, y});
  }
  if (cells.size() >= 63 || (std::size_t{1} << cells.size()) > max_relations) {
    throw Error(ErrorKind::SizeGuard, std::to_string(cells.size()) + " relation cells exceed the enumeration limit");
  }
  std::vector<RelationalMorphism> out;
  RelationalMorphism m{a, b, {}, {}};
  for (std::size_t mask = 0; mask < (std::size_t{1} << cells.size()); ++mask) {
    m.map.clear();
    for (const auto& x : a.events()) m.map[x];
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (mask >> i & 1) m.map[cells[i].first].insert(cells[i].second);
    }
    if (is_valid(m)) out.push_back(m);
  }
  return out;
}

bool has_universal_property(const Cospan& c, const Sharing& shared, const EventStructure& y,
                            std::size_t max_relations) {
  using Cocone = std::pair<Relation, Relation>;
  std::map<Cocone, int> count;
  auto gas = enumerate_morphisms(c.left.source, y, max_relations);
  auto gbs = enumerate_morphisms(c.right.source, y, max_relations);
  for (const auto& ga : gas) {
    for (const auto& gb : gbs) {
      bool agree = std::all_of(shared.begin(), shared.end(),
                               [&](const auto& s) { return ga(s.first) == gb(s.second); });
      if (agree) count[{ga.map, gb.map}] = 0;
    }
  }
  for (const auto& u : enumerate_morphisms(c.object, y, max_relations)) {
    auto it = count.find({compose(u, c.left).map, compose(u, c.right).map});
    if (it == count.end()) return false;
    ++it->second;
  }
  return std::all_of(count.begin(), count.end(), [](const auto& kv) { return kv.second == 1; });
}

RelationalMorphism parse_relation(std::string_view text, EventStructure source, EventStructure target) {
  Relation map;
  SplitDeps deps;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string l = trim(raw);
    if (l.empty() || l[0] == '#') continue;
    if (l.rfind("split-dep ", 0) == 0) {
      auto arrow = l.find("<-");
      if (arrow == std::string::npos) throw SyntaxError(line, 1, "expected 'split-dep <dependent> <- <dependency>'");
      auto dependent = trim(std::string_view(l).substr(10, arrow - 10));
      auto dependency = trim(std::string_view(l).substr(arrow + 2));
      if (dependent.empty() || dependency.empty()) throw SyntaxError(line, 1, "empty split dependency");
      deps.insert({dependent, dependency});
      continue;
    }
    auto arrow = l.find("->");
    if (arrow == std::string::npos) throw SyntaxError(line, 1, "expected '<event> -> <events>'");
    auto src = trim(std::string_view(l).substr(0, arrow));
    if (src.empty()) throw SyntaxError(line, 1, "missing source event");
    if (map.count(src)) throw Error(ErrorKind::Duplicate, "line " + std::to_string(line) + ": '" + src + "' mapped twice");
    Context img;
    std::string rest = l.substr(arrow + 2);
    std::size_t start = 0;
    while (start <= rest.size()) {
      auto comma = rest.find(',', start);
      auto item = trim(std::string_view(rest).substr(start, comma == std::string::npos ? std::string::npos : comma - start));
      if (!item.empty()) {
        img.insert(item);
      } else if (comma != std::string::npos) {
        throw SyntaxError(line, arrow + 3 + start, "empty event name");
      }
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    map[src] = std::move(img);
  }
  return make_morphism(std::move(source), std::move(target), std::move(map), std::move(deps));
}

std::string to_text(const RelationalMorphism& m) {
  std::string out;
  for (const auto& [x, img] : m.map) {
    out += x + " ->";
    bool first = true;
    for (const auto& t : img) {
      out += first ? " " : ",";
      out += t;
      first = false;
    }
    out += "\n";
  }
  for (const auto& [a, b] : m.split_deps) out += "split-dep " + a + " <- " + b + "\n";
  return out;
}

}  // namespace pkgsem
