#include "pkgsem/event_structure.hpp"

#include <algorithm>
#include <deque>

#include "pkgsem/error.hpp"

namespace pkgsem {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Syntax: return "syntax error";
    case ErrorKind::UnknownEvent: return "unknown event";
    case ErrorKind::InconsistentContext: return "inconsistent context";
    case ErrorKind::Closure: return "closure violation";
    case ErrorKind::Duplicate: return "duplicate declaration";
    case ErrorKind::StateCap: return "state cap exceeded";
    case ErrorKind::ExpansionBound: return "expansion bound exceeded";
    case ErrorKind::NotWaeNormal: return "term is not wae-normal";
    case ErrorKind::Deadlocked: return "deadlocked term";
    case ErrorKind::Shape: return "shape mismatch";
    case ErrorKind::NameCollision: return "name collision";
    case ErrorKind::NotVersionRelated: return "not version-related";
    case ErrorKind::Unsatisfiable: return "unsatisfiable";
    case ErrorKind::SizeGuard: return "size guard exceeded";
  }
  return "error";
}

bool is_subset(const Context& sub, const Context& super) {
  return sub.size() <= super.size() &&
         std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

ContextFamily minimize(const ContextFamily& family) {
  ContextFamily out;
  for (const auto& c : family) {
    bool dominated = std::any_of(family.begin(), family.end(), [&](const Context& other) {
      return other.size() < c.size() && is_subset(other, c);
    });
    if (!dominated) out.insert(c);
  }
  return out;
}

std::string render_context(const Context& ctx) {
  std::string s = "{";
  bool first = true;
  for (const auto& e : ctx) {
    if (!first) s += ", ";
    s += e;
    first = false;
  }
  return s + "}";
}

EventStructure::EventStructure(std::set<EventId> events, ContextFamily conflicts,
                               std::map<EventId, ContextFamily> enablings)
    : events_(std::move(events)),
      conflicts_(std::move(conflicts)),
      enablings_(std::move(enablings)) {
  for (const auto& e : events_) enablings_.try_emplace(e);
}

EventStructure EventStructure::minimized(std::set<EventId> events, ContextFamily conflicts,
                                         std::map<EventId, ContextFamily> enablings) {
  for (auto& [e, family] : enablings) family = minimize(family);
  return EventStructure(std::move(events), minimize(conflicts), std::move(enablings));
}

const ContextFamily& EventStructure::enablings(const EventId& e) const {
  auto it = enablings_.find(e);
  if (it == enablings_.end() || !contains(e)) {
    throw Error(ErrorKind::UnknownEvent, "unknown event '" + e + "'");
  }
  return it->second;
}

void EventStructure::require_known(const Context& ctx) const {
  for (const auto& e : ctx) {
    if (!contains(e)) throw Error(ErrorKind::UnknownEvent, "unknown event '" + e + "'");
  }
}

bool EventStructure::consistent_unchecked(const Context& ctx) const {
  return std::none_of(conflicts_.begin(), conflicts_.end(),
                      [&](const Context& k) { return is_subset(k, ctx); });
}

bool EventStructure::is_consistent(const Context& ctx) const {
  require_known(ctx);
  return consistent_unchecked(ctx);
}

bool EventStructure::enables(const Context& ctx, const EventId& e) const {
  require_known(ctx);
  const auto& family = enablings(e);
  if (!consistent_unchecked(ctx)) {
    throw Error(ErrorKind::InconsistentContext,
                "context " + render_context(ctx) + " is inconsistent");
  }
  return std::any_of(family.begin(), family.end(),
                     [&](const Context& c) { return is_subset(c, ctx); });
}

std::set<EventId> EventStructure::enabled_events(const Context& ctx) const {
  require_known(ctx);
  if (!consistent_unchecked(ctx)) {
    throw Error(ErrorKind::InconsistentContext,
                "context " + render_context(ctx) + " is inconsistent");
  }
  std::set<EventId> out;
  for (const auto& e : events_) {
    if (ctx.count(e)) continue;
    const auto& family = enablings_.at(e);
    bool enabled = std::any_of(family.begin(), family.end(),
                               [&](const Context& c) { return is_subset(c, ctx); });
    if (!enabled) continue;
    Context next = ctx;
    next.insert(e);
    if (consistent_unchecked(next)) out.insert(e);
  }
  return out;
}

std::set<Context> EventStructure::configurations(std::size_t max_size) const {
  std::set<Context> seen{Context{}};
  std::deque<Context> frontier{Context{}};
  while (!frontier.empty()) {
    Context ctx = std::move(frontier.front());
    frontier.pop_front();
    if (ctx.size() >= max_size) continue;
    for (const auto& e : enabled_events(ctx)) {
      Context next = ctx;
      next.insert(e);
      if (seen.insert(next).second) frontier.push_back(std::move(next));
    }
  }
  return seen;
}

std::vector<std::string> validate(const EventStructure& ges) {
  std::vector<std::string> out;
  const auto& events = ges.events();
  auto unknown_in = [&](const Context& ctx) {
    Context missing;
    for (const auto& e : ctx)
      if (!events.count(e)) missing.insert(e);
    return missing;
  };

  for (const auto& k : ges.conflicts()) {
    if (k.empty()) out.push_back("conflict: empty minimal conflict");
    if (auto missing = unknown_in(k); !missing.empty()) {
      out.push_back("closure: conflict " + render_context(k) + " mentions unknown " +
                    render_context(missing));
    }
    for (const auto& other : ges.conflicts()) {
      if (other.size() < k.size() && is_subset(other, k)) {
        out.push_back("minimality: conflict " + render_context(k) + " contains conflict " +
                      render_context(other));
      }
    }
  }

  for (const auto& [e, family] : ges.enabling_map()) {
    if (!events.count(e)) {
      out.push_back("closure: enabling entry for unknown event '" + e + "'");
    }
    for (const auto& c : family) {
      if (auto missing = unknown_in(c); !missing.empty()) {
        out.push_back("closure: enabling " + render_context(c) + " of '" + e +
                      "' mentions unknown " + render_context(missing));
      }
      for (const auto& other : family) {
        if (other.size() < c.size() && is_subset(other, c)) {
          out.push_back("minimality: enabling " + render_context(c) + " of '" + e +
                        "' contains enabling " + render_context(other));
        }
      }
    }
  }
  return out;
}

std::vector<std::string> warnings(const EventStructure& ges) {
  std::vector<std::string> out;
  for (const auto& [e, family] : ges.enabling_map()) {
    for (const auto& c : family) {
      bool inconsistent = std::any_of(ges.conflicts().begin(), ges.conflicts().end(),
                                      [&](const Context& k) { return is_subset(k, c); });
      if (inconsistent) {
        out.push_back("enabling " + render_context(c) + " of '" + e +
                      "' is inconsistent and can never be satisfied");
      }
    }
  }
  return out;
}

}  // namespace pkgsem
