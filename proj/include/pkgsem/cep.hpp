#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pkgsem/event_structure.hpp"

namespace pkgsem {

/// Reserved event that is never fired. `0.P` is encoded as a wait on it.
inline const EventId kStopEvent = "\xE2\x8A\xA5";  // U+22A5

/// Abstract syntax of CEP processes.
///
///   Fire  e![x1,x2..].P   fire e unless an exclusion has fired, then block them
///   Wait  ~e.P            proceed once e has fired
///   Par   P + Q + ...     parallel sum (never of arity 0 or 1)
///   Nil   0
class Term {
 public:
  enum class Kind { Nil, Fire, Wait, Par };

  Term() = default;

  static Term nil() { return Term(); }
  static Term fire(EventId e, std::vector<EventId> exclusions, Term cont);
  static Term fire(EventId e, std::vector<EventId> exclusions = {});
  static Term wait(EventId e, Term cont);
  static Term wait(EventId e);
  static Term stop(Term cont) { return wait(kStopEvent, std::move(cont)); }
  /// Zero summands give Nil, one gives the summand itself.
  static Term par(std::vector<Term> summands);

  Kind kind() const noexcept { return kind_; }
  bool is_nil() const noexcept { return kind_ == Kind::Nil; }
  const EventId& event() const noexcept { return event_; }
  const std::vector<EventId>& exclusions() const noexcept { return exclusions_; }
  const Term& cont() const { return children_.front(); }
  const std::vector<Term>& summands() const noexcept { return children_; }

  friend bool operator==(const Term&, const Term&) = default;
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

 private:
  Kind kind_ = Kind::Nil;
  EventId event_;
  std::vector<EventId> exclusions_;
  std::vector<Term> children_;
};

inline Term Term::fire(EventId e, std::vector<EventId> exclusions) {
  return fire(std::move(e), std::move(exclusions), Term());
}
inline Term Term::wait(EventId e) { return wait(std::move(e), Term()); }

/// Concrete syntax: `e`, `e![a,b]`, `~e`, `.`, `+`, `0`, parentheses.
///
/// Identifiers are `[A-Za-z0-9_#:-]` runs; a `.` joins an identifier only
/// between two digits (`leftpad-1.1`), otherwise it is sequencing.
Term parse_term(std::string_view text);
std::string to_string(const Term& t);

/// Every event mentioned (fired, awaited or excluded), without kStopEvent.
std::set<EventId> symbols(const Term& t);
/// Events fired somewhere in `t`.
std::set<EventId> fired_events(const Term& t);

inline constexpr std::size_t kDefaultStateCap = 1'000'000;

struct MachineState {
  std::vector<EventId> fired;   // Gamma, in firing order
  std::set<EventId> excluded;   // Delta
  Term term;

  friend bool operator==(const MachineState&, const MachineState&) = default;
  friend auto operator<=>(const MachineState&, const MachineState&) = default;
};

/// All states reachable by exactly one rule application at one position.
std::set<MachineState> step(const MachineState& s);

using Trace = std::vector<EventId>;
using TraceSet = std::set<Trace>;

/// Prefix-closed set of every fired list reachable from ([], {}, t).
/// Throws Error(StateCap) once more than `state_cap` states are explored.
TraceSet traces(const Term& t, std::size_t state_cap = kDefaultStateCap);

/// Fired lists of every reachable state, as sets.
std::set<Context> fired_sets(const Term& t, std::size_t state_cap = kDefaultStateCap);

/// Erases `silent` events from every trace.
TraceSet erase_events(const TraceSet& traces, const std::set<EventId>& silent);

bool trace_equiv(const Term& p, const Term& q, std::size_t state_cap = kDefaultStateCap);
bool weak_trace_equiv(const Term& p, const Term& q, const std::set<EventId>& silent,
                      std::size_t state_cap = kDefaultStateCap);

/// A stuck reachable state with a summand blocked on something that is
/// neither excluded nor waiting (transitively) on an excluded event.
std::optional<MachineState> find_deadlock(const Term& t,
                                          std::size_t state_cap = kDefaultStateCap);
inline bool is_deadlock_free_semantic(const Term& t, std::size_t state_cap = kDefaultStateCap) {
  return !find_deadlock(t, state_cap).has_value();
}

/// Trie of a trace set; children ordered by label.
struct SyncTree {
  struct Node {
    EventId label;
    std::vector<Node> children;
  };
  Node root;

  std::size_t node_count() const;
  /// ASCII drawing, one node per line.
  std::string render() const;
};

SyncTree sync_tree(const TraceSet& traces);
inline SyncTree sync_tree(const Term& t, std::size_t state_cap = kDefaultStateCap) {
  return sync_tree(traces(t, state_cap));
}

std::string render_trace(const Trace& t);

}  // namespace pkgsem
