#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pkgsem/event_structure.hpp"

namespace pkgsem {

/// A MAJOR.MINOR version. `Version: 1` is accepted and keeps its short
/// spelling ("text-1"), but orders and compares as 1.0.
struct Version {
  unsigned major = 0;
  unsigned minor = 0;
  bool spelled_minor = true;

  friend bool operator==(const Version& a, const Version& b) {
    return a.major == b.major && a.minor == b.minor;
  }
  friend std::strong_ordering operator<=>(const Version& a, const Version& b) {
    if (auto c = a.major <=> b.major; c != 0) return c;
    return a.minor <=> b.minor;
  }
};

std::string to_string(const Version& v);

struct VersionConstraint {
  enum class Kind { Exact, Caret, Range, AnyOf, AllOf };

  Kind kind = Kind::Exact;
  Version version;                // Exact, Caret
  std::optional<Version> lower;   // Range, inclusive; absent means unbounded
  std::optional<Version> upper;   // Range, exclusive; absent means unbounded
  std::vector<VersionConstraint> parts;  // AnyOf, AllOf (non-empty)

  static VersionConstraint exact(Version v);
  static VersionConstraint caret(Version v);
  static VersionConstraint range(std::optional<Version> lo, std::optional<Version> hi);
  static VersionConstraint any_of(std::vector<VersionConstraint> parts);
  static VersionConstraint all_of(std::vector<VersionConstraint> parts);

  bool matches(const Version& v) const;
};

std::string to_string(const VersionConstraint& c);

struct PackageDecl {
  std::string name;
  Version version;
  std::map<std::string, VersionConstraint> dependencies;

  EventId id() const { return name + "-" + to_string(version); }
};

struct RepositoryManifest {
  std::vector<PackageDecl> packages;

  const PackageDecl* find(const EventId& id) const;
  /// Declared versions of `name`, ascending.
  std::vector<const PackageDecl*> versions_of(const std::string& name) const;
};

/// Parses the line-oriented manifest format and checks uniqueness and
/// dependency closure. Throws SyntaxError or Error(Duplicate | Closure).
RepositoryManifest parse_manifest(std::string_view text);

/// Checks (name, version) uniqueness and dependency closure of an already
/// built manifest.
void check_manifest(const RepositoryManifest& manifest);

/// Declared versions of `name` that satisfy `c`; an empty result is a
/// closure violation.
std::set<EventId> resolve_constraint(const RepositoryManifest& manifest,
                                     const std::string& name, const VersionConstraint& c);

inline constexpr std::size_t kDefaultClauseBound = 10'000;

/// Events are declared packages, versions of one name conflict pairwise and
/// each package is enabled by the DNF expansion of its dependency map.
EventStructure to_event_structure(const RepositoryManifest& manifest,
                                  std::size_t clause_bound = kDefaultClauseBound);

/// Canonical rendering (packages sorted by name, then version).
std::string to_text(const RepositoryManifest& manifest);

}  // namespace pkgsem
