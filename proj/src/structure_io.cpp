#include <sstream>

#include "pkgsem/error.hpp"
#include "pkgsem/event_structure.hpp"

namespace pkgsem {

namespace {

void append_context(std::string& out, const Context& ctx) {
  for (const auto& e : ctx) {
    out += ' ';
    out += e;
  }
}

struct Token {
  std::string text;
  std::size_t column;
};

std::vector<Token> split_tokens(const std::string& line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size() || line[i] == '#') break;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

}  // namespace

std::string to_text(const EventStructure& ges) {
  std::string out;
  for (const auto& e : ges.events()) {
    out += "event " + e + "\n";
  }
  for (const auto& k : ges.conflicts()) {
    out += "conflict";
    append_context(out, k);
    out += '\n';
  }
  for (const auto& [e, family] : ges.enabling_map()) {
    for (const auto& c : family) {
      out += "enable " + e + " <-";
      append_context(out, c);
      out += '\n';
    }
  }
  return out;
}

EventStructure parse_structure(std::string_view text) {
  std::set<EventId> events;
  ContextFamily conflicts;
  std::map<EventId, ContextFamily> enablings;

  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto tokens = split_tokens(line);
    if (tokens.empty()) continue;
    const auto& head = tokens.front();
    if (head.text == "event") {
      if (tokens.size() != 2) {
        throw SyntaxError(line_no, head.column, "'event' takes exactly one identifier");
      }
      events.insert(tokens[1].text);
    } else if (head.text == "conflict") {
      Context k;
      for (std::size_t i = 1; i < tokens.size(); ++i) k.insert(tokens[i].text);
      conflicts.insert(std::move(k));
    } else if (head.text == "enable") {
      if (tokens.size() < 3 || tokens[2].text != "<-") {
        throw SyntaxError(line_no, head.column, "expected 'enable <event> <- <context>'");
      }
      Context c;
      for (std::size_t i = 3; i < tokens.size(); ++i) c.insert(tokens[i].text);
      enablings[tokens[1].text].insert(std::move(c));
    } else {
      throw SyntaxError(line_no, head.column, "unknown directive '" + head.text + "'");
    }
  }
  return EventStructure(std::move(events), std::move(conflicts), std::move(enablings));
}

}  // namespace pkgsem
