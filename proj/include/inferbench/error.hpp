#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace inferbench {

/// Broad failure class; the CLI maps each to a process exit code.
enum class ErrorKind {
  Usage = 1,
  Data = 2,
  Shortfall = 3,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Malformed input text. `line` is 1-based (0 when unknown), `column` is a
/// 0-based byte offset into the line.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error(ErrorKind::Data, format(message, line, column)),
        message_(message),
        line_(line),
        column_(column) {}

  /// The message without the position prefix.
  const std::string& message() const noexcept { return message_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& message, std::size_t line,
                            std::size_t column) {
    std::string out;
    if (line > 0) out += "line " + std::to_string(line) + ", ";
    out += "column " + std::to_string(column) + ": " + message;
    return out;
  }

  std::string message_;
  std::size_t line_;
  std::size_t column_;
};

/// A pool could not supply the number of examples needed for balance.
class ShortfallError : public Error {
 public:
  explicit ShortfallError(const std::string& message)
      : Error(ErrorKind::Shortfall, message) {}
};

}  // namespace inferbench
