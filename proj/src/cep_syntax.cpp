#include <algorithm>
#include <cctype>

#include "pkgsem/cep.hpp"
#include "pkgsem/error.hpp"

namespace pkgsem {

Term Term::fire(EventId e, std::vector<EventId> exclusions, Term cont) {
  if (e.empty()) throw Error(ErrorKind::Shape, "empty event name");
  Term t;
  t.kind_ = Kind::Fire;
  for (auto& x : exclusions) {
    if (x == e) throw Error(ErrorKind::Shape, "event '" + e + "' cannot exclude itself");
    if (std::find(t.exclusions_.begin(), t.exclusions_.end(), x) == t.exclusions_.end()) {
      t.exclusions_.push_back(std::move(x));
    }
  }
  t.event_ = std::move(e);
  t.children_.push_back(std::move(cont));
  return t;
}

Term Term::wait(EventId e, Term cont) {
  if (e.empty()) throw Error(ErrorKind::Shape, "empty event name");
  Term t;
  t.kind_ = Kind::Wait;
  t.event_ = std::move(e);
  t.children_.push_back(std::move(cont));
  return t;
}

Term Term::par(std::vector<Term> summands) {
  if (summands.empty()) return Term();
  if (summands.size() == 1) return std::move(summands.front());
  Term t;
  t.kind_ = Kind::Par;
  t.children_ = std::move(summands);
  return t;
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
  if (auto c = a.event_ <=> b.event_; c != 0) return c;
  if (auto c = a.exclusions_ <=> b.exclusions_; c != 0) return c;
  return a.children_ <=> b.children_;
}

namespace {

void collect(const Term& t, std::set<EventId>& out, bool fired_only) {
  switch (t.kind()) {
    case Term::Kind::Nil: return;
    case Term::Kind::Fire:
      out.insert(t.event());
      if (!fired_only) out.insert(t.exclusions().begin(), t.exclusions().end());
      collect(t.cont(), out, fired_only);
      return;
    case Term::Kind::Wait:
      if (!fired_only && t.event() != kStopEvent) out.insert(t.event());
      collect(t.cont(), out, fired_only);
      return;
    case Term::Kind::Par:
      for (const auto& s : t.summands()) collect(s, out, fired_only);
      return;
  }
}

std::string sequence_tail(const Term& t) {
  if (t.kind() == Term::Kind::Par) return "(" + to_string(t) + ")";
  return to_string(t);
}

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '#' ||
         c == ':';
}

class TermParser {
 public:
  explicit TermParser(std::string_view text) : text_(text) {}

  Term parse() {
    Term t = sum();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return t;
  }

 private:
  struct Item {
    enum class Kind { Stop, Fire, Wait, Group } kind;
    EventId event;
    std::vector<EventId> exclusions;
    Term group;
    std::size_t at;
  };

  Term sum() {
    std::vector<Term> parts{sequence()};
    while (accept('+')) parts.push_back(sequence());
    return Term::par(std::move(parts));
  }

  Term sequence() {
    std::vector<Item> items{item()};
    while (accept('.')) items.push_back(item());
    Term t;
    for (std::size_t i = items.size(); i-- > 0;) {
      Item& it = items[i];
      bool last = i + 1 == items.size();
      switch (it.kind) {
        case Item::Kind::Stop: t = last ? Term::nil() : Term::stop(std::move(t)); break;
        case Item::Kind::Fire:
          if (std::find(it.exclusions.begin(), it.exclusions.end(), it.event) !=
              it.exclusions.end()) {
            fail_at(it.at, "event '" + it.event + "' cannot exclude itself");
          }
          t = Term::fire(it.event, it.exclusions, std::move(t));
          break;
        case Item::Kind::Wait: t = Term::wait(it.event, std::move(t)); break;
        case Item::Kind::Group:
          if (!last) fail_at(it.at, "a parenthesized sum cannot be followed by '.'");
          t = std::move(it.group);
          break;
      }
    }
    return t;
  }

  Item item() {
    skip_space();
    std::size_t at = pos_;
    if (accept('(')) {
      Term inner = sum();
      if (!accept(')')) fail("expected ')'");
      return {Item::Kind::Group, {}, {}, std::move(inner), at};
    }
    if (accept('~')) {
      return {Item::Kind::Wait, identifier(), {}, {}, at};
    }
    EventId id = identifier();
    if (id == "0") return {Item::Kind::Stop, {}, {}, {}, at};
    std::vector<EventId> exclusions;
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == '!') {
      ++pos_;
      if (!accept('[')) fail("expected '[' after '!'");
      if (!accept(']')) {
        exclusions.push_back(identifier());
        while (accept(',')) exclusions.push_back(identifier());
        if (!accept(']')) fail("expected ']'");
      }
    }
    return {Item::Kind::Fire, std::move(id), std::move(exclusions), {}, at};
  }

  EventId identifier() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (ident_char(c)) {
        ++pos_;
      } else if (c == '.' && pos_ > start && pos_ + 1 < text_.size() &&
                 std::isdigit(static_cast<unsigned char>(text_[pos_ - 1])) &&
                 std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
        ++pos_;
      } else {
        break;
      }
    }
    if (pos_ == start) fail("expected an event identifier");
    return EventId(text_.substr(start, pos_ - start));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const { fail_at(pos_, what); }

  [[noreturn]] void fail_at(std::size_t at, const std::string& what) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < at && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw SyntaxError(line, col, what);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Term parse_term(std::string_view text) { return TermParser(text).parse(); }

std::string to_string(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Nil: return "0";
    case Term::Kind::Fire: {
      std::string s = t.event();
      if (!t.exclusions().empty()) {
        s += "![";
        for (std::size_t i = 0; i < t.exclusions().size(); ++i) {
          if (i) s += ",";
          s += t.exclusions()[i];
        }
        s += "]";
      }
      if (!t.cont().is_nil()) s += "." + sequence_tail(t.cont());
      return s;
    }
    case Term::Kind::Wait: {
      std::string s = t.event() == kStopEvent ? "0" : "~" + t.event();
      if (!t.cont().is_nil() || t.event() == kStopEvent) s += "." + sequence_tail(t.cont());
      return s;
    }
    case Term::Kind::Par: {
      std::string s;
      for (std::size_t i = 0; i < t.summands().size(); ++i) {
        if (i) s += " + ";
        const Term& part = t.summands()[i];
        s += part.kind() == Term::Kind::Par ? "(" + to_string(part) + ")" : to_string(part);
      }
      return s;
    }
  }
  return {};
}

std::set<EventId> symbols(const Term& t) {
  std::set<EventId> out;
  collect(t, out, false);
  return out;
}

std::set<EventId> fired_events(const Term& t) {
  std::set<EventId> out;
  collect(t, out, true);
  return out;
}

std::string render_trace(const Trace& t) {
  std::string s = "[";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += ",";
    s += t[i];
  }
  return s + "]";
}

}  // namespace pkgsem
