#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pkgsem/category.hpp"
#include "pkgsem/cep.hpp"
#include "pkgsem/event_structure.hpp"
#include "pkgsem/manifest.hpp"

namespace pkgsem {

/// p is a lower version of q: substituting q for p keeps every consistent
/// context consistent and every enabling an enabling, p's own enablings
/// becoming enablings of q. Throws UnknownEvent.
bool is_version_related(const EventStructure& ges, const EventId& p, const EventId& q);

/// (lower, higher)
using VersionPairs = std::vector<std::pair<EventId, EventId>>;

/// Replaces each lower version by its higher one and drops it. Pairs are
/// applied in order; throws Error(NotVersionRelated).
EventStructure quotient_versions(const EventStructure& ges, const VersionPairs& pairs);

/// The endomorphism p |-> q, factored through the quotient.
struct VersionFactorization {
  EventStructure quotient;
  RelationalMorphism merge;   // ges -> quotient
  RelationalMorphism inject;  // quotient -> ges
};
VersionFactorization version_endomorphism(const EventStructure& ges, const EventId& p, const EventId& q);

/// For each package name, every lower version that is version-related to
/// the highest one, found greedily from the lowest.
VersionPairs version_pairs(const RepositoryManifest& m);
/// Drops each lower declaration and widens constraints that admitted it to
/// admit the higher one. Throws Error(NotVersionRelated).
RepositoryManifest quotient_manifest(const RepositoryManifest& m, const VersionPairs& pairs);

struct BuildPlan {
  EventId target;
  std::vector<EventId> install_order;
};

/// Shortest install order reaching `target`, lexicographically least among
/// those. Throws UnknownEvent, StateCap.
std::optional<BuildPlan> solve(const EventStructure& ges, const EventId& target,
                               std::size_t state_cap = kDefaultStateCap);

/// Exhaustive: some configuration contains `target`. Throws UnknownEvent,
/// SizeGuard past `max_events`.
bool solve_oracle(const EventStructure& ges, const EventId& target, std::size_t max_events = 20);

/// Reads solvability off the wae-normal form of encode(ges): some wait-set
/// enabling `target` is fired, grounded and pairwise conflict-free.
bool solve_wae(const EventStructure& ges, const EventId& target);

enum class ConflictModel { Strict, Vendored, LastWins, Mangled };
const char* to_string(ConflictModel m);
/// `strict`, `vendored`, `last-wins`, `mangled`; throws Syntax.
ConflictModel parse_conflict_model(std::string_view name);

struct ModelRun {
  /// Rendered events (`pkg@scope`, `mangle(pkg)` ...). For last-wins: the
  /// surviving environment in load order.
  std::vector<std::string> trace;
  /// Every load in order (last-wins only).
  std::vector<EventId> history;
  /// Strict only: the first request that could not be installed.
  std::optional<std::string> failure;
};

/// Installs each request with its dependencies first (dependency names in
/// order, preferring a version already in scope, else the highest match).
/// Throws UnknownEvent for undeclared requests.
ModelRun run_conflict_model(const RepositoryManifest& repo, const std::vector<EventId>& requests,
                            ConflictModel model);

/// One event per line; last-wins adds a `history:` line.
std::string render(const ModelRun& run, ConflictModel model);

}  // namespace pkgsem
