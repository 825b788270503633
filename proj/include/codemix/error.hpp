#pragma once

#include <stdexcept>
#include <string>

namespace codemix {

// Every failure raised by the library derives from Error. The kind maps
// one-to-one onto the CLI exit codes.
enum class ErrorKind { kConfig = 2, kData = 3, kNumeric = 4 };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what)
      : Error(ErrorKind::kConfig, what) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ErrorKind::kData, what) {}
};

/// A DataError pinned to a position in its input: a 1-based line number for
/// block files, a 0-based data-row index for CSV.
class ParseError : public DataError {
 public:
  ParseError(std::size_t position, const std::string& what,
             const char* unit = "line")
      : DataError(unit + (" " + std::to_string(position)) + ": " + what),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what)
      : Error(ErrorKind::kNumeric, what) {}
};

}  // namespace codemix
