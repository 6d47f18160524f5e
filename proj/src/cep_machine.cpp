#include <algorithm>
#include <deque>
#include <map>

#include "pkgsem/cep.hpp"
#include "pkgsem/error.hpp"

namespace pkgsem {

namespace {

struct Move {
  Term term;
  const EventId* fired = nullptr;
  const std::vector<EventId>* exclusions = nullptr;
};

bool contains(const std::vector<EventId>& v, const EventId& e) {
  return std::find(v.begin(), v.end(), e) != v.end();
}

bool can_fire(const Term& t, const std::vector<EventId>& fired, const std::set<EventId>& excluded) {
  if (excluded.count(t.event())) return false;
  return std::none_of(t.exclusions().begin(), t.exclusions().end(),
                      [&](const EventId& x) { return contains(fired, x); });
}

void moves(const Term& t, const MachineState& s, std::vector<Move>& out) {
  switch (t.kind()) {
    case Term::Kind::Nil: return;
    case Term::Kind::Fire:
      if (can_fire(t, s.fired, s.excluded)) out.push_back({t.cont(), &t.event(), &t.exclusions()});
      return;
    case Term::Kind::Wait:
      if (contains(s.fired, t.event())) out.push_back({t.cont()});
      return;
    case Term::Kind::Par: {
      const auto& parts = t.summands();
      for (std::size_t i = 0; i < parts.size(); ++i) {
        if (parts[i].is_nil()) {
          std::vector<Term> rest;
          for (std::size_t j = 0; j < parts.size(); ++j) {
            if (j != i) rest.push_back(parts[j]);
          }
          out.push_back({Term::par(std::move(rest))});
          continue;
        }
        std::vector<Move> inner;
        moves(parts[i], s, inner);
        for (auto& m : inner) {
          std::vector<Term> next = parts;
          next[i] = std::move(m.term);
          // par() keeps arity >= 2 as is, so a Nil summand survives for Unit
          out.push_back({Term::par(std::move(next)), m.fired, m.exclusions});
        }
      }
      return;
    }
  }
}

MachineState apply(const MachineState& s, Move m) {
  MachineState n{s.fired, s.excluded, std::move(m.term)};
  if (m.fired) {
    if (!contains(n.fired, *m.fired)) n.fired.push_back(*m.fired);
    n.excluded.insert(m.exclusions->begin(), m.exclusions->end());
  }
  return n;
}

// Exploration works on flattened sums with Nil summands dropped and summands
// sorted; this quotients states by the Par monoid and Unit. Events and head
// summands are interned so that stored states are small.
class Pool {
 public:
  struct Head {
    const Term* term;
    bool fire;
    int event;
    std::vector<int> exclusions;
    std::vector<int> cont;
  };

  int event(const EventId& e) {
    auto [it, fresh] = event_ids_.emplace(e, static_cast<int>(names_.size()));
    if (fresh) names_.push_back(e);
    return it->second;
  }

  void flatten(const Term& t, std::vector<int>& out) {
    switch (t.kind()) {
      case Term::Kind::Nil: return;
      case Term::Kind::Par:
        for (const auto& s : t.summands()) flatten(s, out);
        return;
      default: out.push_back(head(t));
    }
  }

  const Head& at(int id) const { return heads_[static_cast<std::size_t>(id)]; }
  const EventId& name(int id) const { return names_[static_cast<std::size_t>(id)]; }

 private:
  int head(const Term& t) {
    auto found = head_ids_.find(t);
    if (found != head_ids_.end()) return found->second;
    Head h;
    h.fire = t.kind() == Term::Kind::Fire;
    h.event = event(t.event());
    for (const auto& x : t.exclusions()) h.exclusions.push_back(event(x));
    flatten(t.cont(), h.cont);
    int id = static_cast<int>(heads_.size());
    auto it = head_ids_.emplace(t, id).first;
    h.term = &it->first;
    heads_.push_back(std::move(h));
    return id;
  }

  std::vector<EventId> names_;
  std::map<EventId, int> event_ids_;
  std::deque<Head> heads_;
  std::map<Term, int> head_ids_;
};

struct Node {
  std::vector<int> fired;
  std::vector<int> excluded;  // sorted
  std::vector<int> summands;  // sorted

  friend auto operator<=>(const Node&, const Node&) = default;
  friend bool operator==(const Node&, const Node&) = default;
};

bool has(const std::vector<int>& v, int x) { return std::find(v.begin(), v.end(), x) != v.end(); }

std::vector<Node> successors(const Node& n, const Pool& pool) {
  std::vector<Node> out;
  for (std::size_t i = 0; i < n.summands.size(); ++i) {
    if (i > 0 && n.summands[i] == n.summands[i - 1]) continue;
    const Pool::Head& h = pool.at(n.summands[i]);
    bool ok;
    if (h.fire) {
      ok = !std::binary_search(n.excluded.begin(), n.excluded.end(), h.event) &&
           std::none_of(h.exclusions.begin(), h.exclusions.end(),
                        [&](int x) { return has(n.fired, x); });
    } else {
      ok = has(n.fired, h.event);
    }
    if (!ok) continue;
    Node next{n.fired, n.excluded, {}};
    next.summands.reserve(n.summands.size() + h.cont.size());
    for (std::size_t j = 0; j < n.summands.size(); ++j) {
      if (j != i) next.summands.push_back(n.summands[j]);
    }
    next.summands.insert(next.summands.end(), h.cont.begin(), h.cont.end());
    std::sort(next.summands.begin(), next.summands.end());
    if (h.fire) {
      if (!has(next.fired, h.event)) next.fired.push_back(h.event);
      next.excluded.insert(next.excluded.end(), h.exclusions.begin(), h.exclusions.end());
      std::sort(next.excluded.begin(), next.excluded.end());
      next.excluded.erase(std::unique(next.excluded.begin(), next.excluded.end()),
                          next.excluded.end());
    }
    out.push_back(std::move(next));
  }
  return out;
}

struct View {
  const Pool& pool;
  const Node& node;

  Trace fired() const {
    Trace out;
    for (int e : node.fired) out.push_back(pool.name(e));
    return out;
  }
  std::set<EventId> excluded() const {
    std::set<EventId> out;
    for (int e : node.excluded) out.insert(pool.name(e));
    return out;
  }
  std::vector<Term> summands() const {
    std::vector<Term> out;
    for (int s : node.summands) out.push_back(*pool.at(s).term);
    return out;
  }
};

template <class Visit>
void explore(const Term& t, std::size_t cap, Visit visit) {
  Pool pool;
  Node init;
  pool.flatten(t, init.summands);
  std::sort(init.summands.begin(), init.summands.end());
  std::set<Node> seen;
  std::deque<const Node*> queue;
  auto push = [&](Node n) {
    auto [it, fresh] = seen.insert(std::move(n));
    if (!fresh) return;
    if (seen.size() > cap) {
      throw Error(ErrorKind::StateCap,
                  "state cap of " + std::to_string(cap) + " explored states exceeded");
    }
    queue.push_back(&*it);
  };
  push(std::move(init));
  while (!queue.empty()) {
    const Node* n = queue.front();
    queue.pop_front();
    auto next = successors(*n, pool);
    if (!visit(View{pool, *n}, next.empty())) return;
    for (auto& m : next) push(std::move(m));
  }
}

bool fires_somewhere(const Term& t, const EventId& e) {
  switch (t.kind()) {
    case Term::Kind::Nil: return false;
    case Term::Kind::Fire: return t.event() == e || fires_somewhere(t.cont(), e);
    case Term::Kind::Wait: return fires_somewhere(t.cont(), e);
    case Term::Kind::Par:
      return std::any_of(t.summands().begin(), t.summands().end(),
                         [&](const Term& s) { return fires_somewhere(s, e); });
  }
  return false;
}

// Summands of a stuck state that are blocked for a reason that traces back to
// an exclusion (or to the stop event).
std::vector<bool> attributable(const std::vector<Term>& summands, const std::set<EventId>& excluded) {
  std::vector<bool> ok(summands.size(), false);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < summands.size(); ++i) {
      if (ok[i]) continue;
      const Term& s = summands[i];
      bool why = false;
      if (s.kind() == Term::Kind::Fire || fired_events(s).empty()) {
        why = true;
      } else if (s.event() == kStopEvent || excluded.count(s.event())) {
        why = true;
      } else {
        for (std::size_t j = 0; j < summands.size() && !why; ++j) {
          why = ok[j] && fires_somewhere(summands[j], s.event());
        }
      }
      if (why) {
        ok[i] = true;
        changed = true;
      }
    }
  }
  return ok;
}

void count_nodes(const SyncTree::Node& n, std::size_t& acc) {
  ++acc;
  for (const auto& c : n.children) count_nodes(c, acc);
}

void render_node(const SyncTree::Node& n, const std::string& indent, std::string& out) {
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    bool last = i + 1 == n.children.size();
    out += indent + (last ? "`-- " : "+-- ") + n.children[i].label + "\n";
    render_node(n.children[i], indent + (last ? "    " : "|   "), out);
  }
}

}  // namespace

std::set<MachineState> step(const MachineState& s) {
  std::vector<Move> ms;
  moves(s.term, s, ms);
  std::set<MachineState> out;
  for (auto& m : ms) out.insert(apply(s, std::move(m)));
  return out;
}

TraceSet traces(const Term& t, std::size_t state_cap) {
  TraceSet out;
  explore(t, state_cap, [&](const View& v, bool) {
    out.insert(v.fired());
    return true;
  });
  return out;
}

std::set<Context> fired_sets(const Term& t, std::size_t state_cap) {
  std::set<Context> out;
  explore(t, state_cap, [&](const View& v, bool) {
    auto f = v.fired();
    out.insert(Context(f.begin(), f.end()));
    return true;
  });
  return out;
}

TraceSet erase_events(const TraceSet& ts, const std::set<EventId>& silent) {
  TraceSet out;
  for (const auto& tr : ts) {
    Trace kept;
    for (const auto& e : tr) {
      if (!silent.count(e)) kept.push_back(e);
    }
    while (true) {
      out.insert(kept);
      if (kept.empty()) break;
      kept.pop_back();
    }
  }
  return out;
}

bool trace_equiv(const Term& p, const Term& q, std::size_t state_cap) {
  return traces(p, state_cap) == traces(q, state_cap);
}

bool weak_trace_equiv(const Term& p, const Term& q, const std::set<EventId>& silent,
                      std::size_t state_cap) {
  return erase_events(traces(p, state_cap), silent) == erase_events(traces(q, state_cap), silent);
}

std::optional<MachineState> find_deadlock(const Term& t, std::size_t state_cap) {
  std::optional<MachineState> witness;
  explore(t, state_cap, [&](const View& v, bool stuck) {
    if (!stuck || v.node.summands.empty()) return true;
    auto summands = v.summands();
    auto excluded = v.excluded();
    auto ok = attributable(summands, excluded);
    if (std::all_of(ok.begin(), ok.end(), [](bool b) { return b; })) return true;
    witness = MachineState{v.fired(), excluded, Term::par(summands)};
    return false;
  });
  return witness;
}

std::size_t SyncTree::node_count() const {
  std::size_t n = 0;
  count_nodes(root, n);
  return n;
}

std::string SyncTree::render() const {
  std::string out = ".\n";
  render_node(root, "", out);
  return out;
}

SyncTree sync_tree(const TraceSet& ts) {
  SyncTree tree;
  for (const auto& tr : ts) {
    SyncTree::Node* at = &tree.root;
    for (const auto& e : tr) {
      auto it = std::find_if(at->children.begin(), at->children.end(),
                             [&](const SyncTree::Node& c) { return c.label == e; });
      if (it == at->children.end()) {
        auto pos = std::lower_bound(
            at->children.begin(), at->children.end(), e,
            [](const SyncTree::Node& c, const EventId& l) { return c.label < l; });
        it = at->children.insert(pos, SyncTree::Node{e, {}});
      }
      at = &*it;
    }
  }
  return tree;
}

}  // namespace pkgsem
