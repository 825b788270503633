#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace codemix::csv {

// Minimal RFC 4180 record reader: comma separated, double-quote quoting with
// "" escapes, CRLF or LF record terminators, quoted fields may span lines.
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  /// Next record, or nullopt at end of input. Throws DataError on an
  /// unterminated quoted field.
  std::optional<std::vector<std::string>> next();

  /// 1-based physical line on which the last returned record started.
  std::size_t record_line() const { return record_line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 1;
  std::size_t record_line_ = 0;
};

}  // namespace codemix::csv
