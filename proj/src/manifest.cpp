#include "pkgsem/manifest.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "pkgsem/error.hpp"

namespace pkgsem {

std::string to_string(const Version& v) {
  if (!v.spelled_minor && v.minor == 0) return std::to_string(v.major);
  return std::to_string(v.major) + "." + std::to_string(v.minor);
}

VersionConstraint VersionConstraint::exact(Version v) {
  VersionConstraint c;
  c.kind = Kind::Exact;
  c.version = v;
  return c;
}

VersionConstraint VersionConstraint::caret(Version v) {
  VersionConstraint c;
  c.kind = Kind::Caret;
  c.version = v;
  return c;
}

VersionConstraint VersionConstraint::range(std::optional<Version> lo, std::optional<Version> hi) {
  VersionConstraint c;
  c.kind = Kind::Range;
  c.lower = lo;
  c.upper = hi;
  return c;
}

VersionConstraint VersionConstraint::any_of(std::vector<VersionConstraint> parts) {
  if (parts.empty()) throw Error(ErrorKind::Shape, "AnyOf needs at least one constraint");
  if (parts.size() == 1) return std::move(parts.front());
  VersionConstraint c;
  c.kind = Kind::AnyOf;
  c.parts = std::move(parts);
  return c;
}

VersionConstraint VersionConstraint::all_of(std::vector<VersionConstraint> parts) {
  if (parts.empty()) throw Error(ErrorKind::Shape, "AllOf needs at least one constraint");
  if (parts.size() == 1) return std::move(parts.front());
  VersionConstraint c;
  c.kind = Kind::AllOf;
  c.parts = std::move(parts);
  return c;
}

bool VersionConstraint::matches(const Version& v) const {
  switch (kind) {
    case Kind::Exact: return v == version;
    case Kind::Caret: return v.major == version.major && v.minor >= version.minor;
    case Kind::Range:
      return (!lower || *lower <= v) && (!upper || v < *upper);
    case Kind::AnyOf:
      return std::any_of(parts.begin(), parts.end(), [&](const auto& p) { return p.matches(v); });
    case Kind::AllOf:
      return std::all_of(parts.begin(), parts.end(), [&](const auto& p) { return p.matches(v); });
  }
  return false;
}

std::string to_string(const VersionConstraint& c) {
  using Kind = VersionConstraint::Kind;
  switch (c.kind) {
    case Kind::Exact: return "= " + to_string(c.version);
    case Kind::Caret: return "^ " + to_string(c.version);
    case Kind::Range: {
      std::string lo = c.lower ? ">= " + to_string(*c.lower) : "";
      std::string hi = c.upper ? "< " + to_string(*c.upper) : "";
      if (!lo.empty() && !hi.empty()) return lo + " && " + hi;
      if (lo.empty() && hi.empty()) return ">= 0.0";
      return lo.empty() ? hi : lo;
    }
    case Kind::AnyOf: {
      std::string s;
      for (const auto& p : c.parts) {
        if (!s.empty()) s += " || ";
        s += to_string(p);
      }
      return s;
    }
    case Kind::AllOf: {
      std::string s;
      for (const auto& p : c.parts) {
        if (!s.empty()) s += " && ";
        if (p.kind == Kind::AnyOf) s += "(" + to_string(p) + ")";
        else s += to_string(p);
      }
      return s;
    }
  }
  return {};
}

const PackageDecl* RepositoryManifest::find(const EventId& id) const {
  for (const auto& p : packages)
    if (p.id() == id) return &p;
  return nullptr;
}

std::vector<const PackageDecl*> RepositoryManifest::versions_of(const std::string& name) const {
  std::vector<const PackageDecl*> out;
  for (const auto& p : packages)
    if (p.name == name) out.push_back(&p);
  std::sort(out.begin(), out.end(),
            [](const PackageDecl* a, const PackageDecl* b) { return a->version < b->version; });
  return out;
}

namespace {

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

std::string lowercase(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

/// Recursive-descent parser over one constraint string.
///   disj := conj ('||' conj)*
///   conj := atom ('&&' atom)*
///   atom := ('=' | '^' | '>=' | '<')? version | '(' disj ')'
class ConstraintParser {
 public:
  ConstraintParser(std::string_view text, std::size_t line, std::size_t column)
      : text_(text), line_(line), base_column_(column) {}

  VersionConstraint parse() {
    auto c = disjunction();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return c;
  }

  Version version() {
    skip_space();
    std::vector<unsigned> parts;
    std::size_t start = pos_;
    while (true) {
      if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        fail("expected a version number");
      }
      unsigned value = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        value = value * 10 + static_cast<unsigned>(text_[pos_] - '0');
        ++pos_;
      }
      parts.push_back(value);
      if (pos_ < text_.size() && text_[pos_] == '.') {
        ++pos_;
        continue;
      }
      break;
    }
    if (parts.size() > 2) {
      pos_ = start;
      fail("only MAJOR.MINOR versions are supported");
    }
    return Version{parts[0], parts.size() == 2 ? parts[1] : 0, parts.size() == 2};
  }

  void expect_end() {
    skip_space();
    if (pos_ != text_.size()) fail("trailing input after version");
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw SyntaxError(line_, base_column_ + pos_, what);
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }

  bool accept(std::string_view token) {
    skip_space();
    if (text_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  VersionConstraint disjunction() {
    std::vector<VersionConstraint> parts{conjunction()};
    while (accept("||")) parts.push_back(conjunction());
    return VersionConstraint::any_of(std::move(parts));
  }

  VersionConstraint conjunction() {
    std::vector<VersionConstraint> parts{atom()};
    while (accept("&&")) parts.push_back(atom());
    // `>= a && < b` is the common cabal range spelling; keep it as one Range.
    if (parts.size() == 2 && parts[0].kind == VersionConstraint::Kind::Range &&
        parts[1].kind == VersionConstraint::Kind::Range && parts[0].lower && !parts[0].upper &&
        !parts[1].lower && parts[1].upper) {
      return VersionConstraint::range(parts[0].lower, parts[1].upper);
    }
    return VersionConstraint::all_of(std::move(parts));
  }

  VersionConstraint atom() {
    if (accept("(")) {
      auto inner = disjunction();
      if (!accept(")")) fail("expected ')'");
      return inner;
    }
    if (accept(">=")) return VersionConstraint::range(version(), std::nullopt);
    if (accept("<")) return VersionConstraint::range(std::nullopt, version());
    if (accept("^")) return VersionConstraint::caret(version());
    if (accept("=")) return VersionConstraint::exact(version());
    return VersionConstraint::exact(version());
  }

  std::string_view text_;
  std::size_t line_;
  std::size_t base_column_;
  std::size_t pos_ = 0;
};

struct Line {
  std::string text;
  std::size_t number;
  std::size_t indent;
};

std::string rtrim(std::string s) {
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.pop_back();
  return s;
}

class ManifestParser {
 public:
  explicit ManifestParser(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t number = 0;
    while (std::getline(in, raw)) {
      ++number;
      std::string s = rtrim(raw);
      std::size_t indent = 0;
      while (indent < s.size() && (s[indent] == ' ' || s[indent] == '\t')) ++indent;
      lines_.push_back({s.substr(indent), number, indent});
    }
  }

  RepositoryManifest parse() {
    RepositoryManifest manifest;
    std::size_t i = 0;
    while (i < lines_.size()) {
      // Skip blank lines and separators between records.
      if (lines_[i].text.empty() || lines_[i].text == "---") {
        ++i;
        continue;
      }
      manifest.packages.push_back(record(i));
    }
    return manifest;
  }

 private:
  PackageDecl record(std::size_t& i) {
    std::optional<std::string> name;
    std::optional<Version> version;
    PackageDecl decl;
    bool in_depends = false;
    std::size_t start_line = lines_[i].number;

    for (; i < lines_.size() && lines_[i].text != "---"; ++i) {
      const Line& ln = lines_[i];
      if (ln.text.empty()) continue;
      auto colon = ln.text.find(':');
      std::string key = colon == std::string::npos ? "" : lowercase(ln.text.substr(0, colon));
      bool is_field = colon != std::string::npos &&
                      std::all_of(key.begin(), key.end(), [](char c) {
                        return std::isalpha(static_cast<unsigned char>(c)) || c == '-';
                      }) &&
                      !key.empty();
      if (is_field) {
        std::string value = ln.text.substr(colon + 1);
        std::size_t value_col = ln.indent + colon + 2;
        in_depends = false;
        if (key == "name") {
          if (name) fail(ln, 1, "duplicate Name field");
          name = identifier(value, ln, value_col);
        } else if (key == "version") {
          if (version) fail(ln, 1, "duplicate Version field");
          ConstraintParser p(value, ln.number, value_col);
          version = p.version();
          p.expect_end();
        } else if (key == "build-depends") {
          in_depends = true;
          dependency_list(value, ln, value_col, decl);
        } else {
          fail(ln, 1, "unknown field '" + ln.text.substr(0, colon) + "'");
        }
      } else if (in_depends) {
        dependency_list(ln.text, ln, ln.indent + 1, decl);
      } else {
        fail(ln, 1, "expected a field ('Name:', 'Version:' or 'build-depends:')");
      }
    }
    if (!name) throw SyntaxError(start_line, 1, "record is missing a Name field");
    if (!version) throw SyntaxError(start_line, 1, "record is missing a Version field");
    decl.name = *name;
    decl.version = *version;
    return decl;
  }

  std::string identifier(const std::string& value, const Line& ln, std::size_t col) {
    std::size_t b = 0;
    while (b < value.size() && (value[b] == ' ' || value[b] == '\t')) ++b;
    std::size_t e = b;
    while (e < value.size() && is_name_char(value[e])) ++e;
    if (e == b) throw SyntaxError(ln.number, col + b, "expected a package name");
    std::size_t rest = e;
    while (rest < value.size() && (value[rest] == ' ' || value[rest] == '\t')) ++rest;
    if (rest != value.size()) throw SyntaxError(ln.number, col + rest, "unexpected text after name");
    return value.substr(b, e - b);
  }

  void dependency_list(const std::string& text, const Line& ln, std::size_t col, PackageDecl& decl) {
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t comma = text.find(',', start);
      std::size_t end = comma == std::string::npos ? text.size() : comma;
      dependency(text.substr(start, end - start), ln, col + start, decl);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }

  void dependency(const std::string& item, const Line& ln, std::size_t col, PackageDecl& decl) {
    std::size_t b = 0;
    while (b < item.size() && (item[b] == ' ' || item[b] == '\t')) ++b;
    if (b == item.size()) return;
    std::size_t e = b;
    while (e < item.size() && is_name_char(item[e])) ++e;
    if (e == b) throw SyntaxError(ln.number, col + b, "expected a dependency name");
    std::string dep = item.substr(b, e - b);
    ConstraintParser p(std::string_view(item).substr(e), ln.number, col + e);
    auto constraint = p.parse();
    if (!decl.dependencies.emplace(dep, std::move(constraint)).second) {
      throw Error(ErrorKind::Duplicate, "line " + std::to_string(ln.number) + ": dependency '" +
                                            dep + "' listed twice");
    }
  }

  [[noreturn]] void fail(const Line& ln, std::size_t col, const std::string& what) const {
    throw SyntaxError(ln.number, ln.indent + col, what);
  }

  std::vector<Line> lines_;
};

}  // namespace

void check_manifest(const RepositoryManifest& manifest) {
  std::set<EventId> seen;
  for (const auto& p : manifest.packages) {
    if (p.name.empty()) throw Error(ErrorKind::Shape, "package with empty name");
    if (!seen.insert(p.id()).second) {
      throw Error(ErrorKind::Duplicate, "package '" + p.id() + "' declared twice");
    }
  }
  for (const auto& p : manifest.packages) {
    for (const auto& [dep, c] : p.dependencies) {
      try {
        resolve_constraint(manifest, dep, c);
      } catch (const Error& e) {
        throw Error(ErrorKind::Closure, "dependency '" + dep + " " + to_string(c) + "' of '" +
                                            p.id() + "' matches no declared package");
      }
    }
  }
}

RepositoryManifest parse_manifest(std::string_view text) {
  auto manifest = ManifestParser(text).parse();
  check_manifest(manifest);
  return manifest;
}

std::set<EventId> resolve_constraint(const RepositoryManifest& manifest, const std::string& name,
                                     const VersionConstraint& c) {
  std::set<EventId> out;
  for (const auto* p : manifest.versions_of(name)) {
    if (c.matches(p->version)) out.insert(p->id());
  }
  if (out.empty()) {
    throw Error(ErrorKind::Closure, "no declared version of '" + name + "' matches '" +
                                        to_string(c) + "'");
  }
  return out;
}

EventStructure to_event_structure(const RepositoryManifest& manifest, std::size_t clause_bound) {
  std::set<EventId> events;
  std::map<EventId, std::string> name_of;
  for (const auto& p : manifest.packages) {
    events.insert(p.id());
    name_of[p.id()] = p.name;
  }

  ContextFamily conflicts;
  for (const auto& p : manifest.packages) {
    for (const auto& q : manifest.packages) {
      if (p.name == q.name && p.version < q.version) conflicts.insert({p.id(), q.id()});
    }
  }

  std::map<EventId, ContextFamily> enablings;
  for (const auto& p : manifest.packages) {
    std::vector<std::set<EventId>> choices;
    std::size_t product = 1;
    for (const auto& [dep, c] : p.dependencies) {
      choices.push_back(resolve_constraint(manifest, dep, c));
      product *= choices.back().size();
      if (product > clause_bound) {
        throw Error(ErrorKind::ExpansionBound,
                    "dependency expansion of '" + p.id() + "' exceeds " +
                        std::to_string(clause_bound) + " clauses");
      }
    }
    std::vector<Context> clauses{Context{}};
    for (const auto& options : choices) {
      std::vector<Context> next;
      for (const auto& clause : clauses) {
        for (const auto& option : options) {
          Context extended = clause;
          extended.insert(option);
          next.push_back(std::move(extended));
        }
      }
      clauses = std::move(next);
    }
    ContextFamily family;
    for (auto& clause : clauses) {
      // A clause holding two versions of one name can never be satisfied.
      std::set<std::string> names;
      bool clean = true;
      for (const auto& e : clause) clean = clean && names.insert(name_of[e]).second;
      if (clean) family.insert(std::move(clause));
    }
    enablings[p.id()] = std::move(family);
  }
  return EventStructure::minimized(std::move(events), std::move(conflicts), std::move(enablings));
}

std::string to_text(const RepositoryManifest& manifest) {
  std::vector<const PackageDecl*> sorted;
  for (const auto& p : manifest.packages) sorted.push_back(&p);
  std::sort(sorted.begin(), sorted.end(), [](const PackageDecl* a, const PackageDecl* b) {
    if (a->name != b->name) return a->name < b->name;
    return a->version < b->version;
  });
  std::string out;
  bool first = true;
  for (const auto* p : sorted) {
    if (!first) out += "---\n";
    first = false;
    out += "Name: " + p->name + "\n";
    out += "Version: " + to_string(p->version) + "\n";
    out += "build-depends:\n";
    for (const auto& [dep, c] : p->dependencies) {
      out += "  " + dep + " " + to_string(c) + "\n";
    }
  }
  return out;
}

}  // namespace pkgsem
