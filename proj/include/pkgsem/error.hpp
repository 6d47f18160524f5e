#pragma once

#include <stdexcept>
#include <string>

namespace pkgsem {

enum class ErrorKind {
  Syntax,
  UnknownEvent,
  InconsistentContext,
  Closure,
  Duplicate,
  StateCap,
  ExpansionBound,
  NotWaeNormal,
  Deadlocked,
  Shape,
  NameCollision,
  NotVersionRelated,
  Unsatisfiable,
  SizeGuard,
};

const char* to_string(ErrorKind kind);

/// Domain error raised by every library operation. The kind lets callers
/// (the CLI in particular) map failures onto exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Parse failure carrying a 1-based source position.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t line, std::size_t column, const std::string& what)
      : Error(ErrorKind::Syntax, "line " + std::to_string(line) + ", column " +
                                     std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace pkgsem
