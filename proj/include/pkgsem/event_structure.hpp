#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace pkgsem {

/// An event (for repositories: a package rendered as "name-MAJOR.MINOR").
using EventId = std::string;
/// A finite set of events.
using Context = std::set<EventId>;
/// A finite set of contexts (minimal conflicts, minimal enablings, ...).
using ContextFamily = std::set<Context>;

bool is_subset(const Context& sub, const Context& super);

/// Drops every member that strictly contains another member.
ContextFamily minimize(const ContextFamily& family);

/// A finite general event structure stored by its generators: consistency is
/// given by minimal conflicts and enabling by minimal enabling contexts.
///
/// A singleton conflict {e} marks e as never consistent. This is what lets
/// Disc(S) say "only the empty context is valid".
class EventStructure {
 public:
  EventStructure() = default;

  /// Stores the generators verbatim (no minimization) so that `validate` can
  /// report malformed input. Every event receives an enabling entry.
  EventStructure(std::set<EventId> events, ContextFamily conflicts,
                 std::map<EventId, ContextFamily> enablings);

  /// Same as the constructor but subset-minimizes conflicts and enablings.
  static EventStructure minimized(std::set<EventId> events, ContextFamily conflicts,
                                  std::map<EventId, ContextFamily> enablings);

  const std::set<EventId>& events() const noexcept { return events_; }
  const ContextFamily& conflicts() const noexcept { return conflicts_; }
  const std::map<EventId, ContextFamily>& enabling_map() const noexcept {
    return enablings_;
  }
  /// Minimal enabling contexts of `e`; throws UnknownEvent.
  const ContextFamily& enablings(const EventId& e) const;

  bool contains(const EventId& e) const { return events_.count(e) != 0; }
  bool empty() const noexcept { return events_.empty(); }

  /// True iff no minimal conflict is a subset of `ctx`.
  bool is_consistent(const Context& ctx) const;
  /// True iff `ctx` is consistent and some minimal enabling of `e` lies in it.
  bool enables(const Context& ctx, const EventId& e) const;
  /// Events outside `ctx` that `ctx` enables and that keep it consistent.
  std::set<EventId> enabled_events(const Context& ctx) const;
  /// Every context reachable from {} by single enabled firings, up to
  /// `max_size` events.
  std::set<Context> configurations(std::size_t max_size) const;
  std::set<Context> configurations() const { return configurations(events_.size()); }

  bool operator==(const EventStructure&) const = default;

 private:
  void require_known(const Context& ctx) const;
  bool consistent_unchecked(const Context& ctx) const;

  std::set<EventId> events_;
  ContextFamily conflicts_;
  std::map<EventId, ContextFamily> enablings_;
};

/// Invariant violations, one human-readable line each. Empty iff well formed.
std::vector<std::string> validate(const EventStructure& ges);

/// Non-fatal findings: enabling contexts that are themselves inconsistent.
std::vector<std::string> warnings(const EventStructure& ges);

/// Canonical text form. Equal structures serialize byte-identically.
///
///     event <id>
///     conflict <id> <id> ...
///     enable <id> <- <id> <id> ...
std::string to_text(const EventStructure& ges);
EventStructure parse_structure(std::string_view text);

std::string render_context(const Context& ctx);

}  // namespace pkgsem
