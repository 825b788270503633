#include "codemix/csv.hpp"

#include <istream>

#include "codemix/error.hpp"

namespace codemix::csv {

std::optional<std::vector<std::string>> Reader::next() {
  if (in_.peek() == std::char_traits<char>::eof()) return std::nullopt;

  record_line_ = line_;
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool field_was_quoted = false;

  for (;;) {
    int c = in_.get();
    if (c == std::char_traits<char>::eof()) {
      if (quoted) throw ParseError(record_line_, "unterminated quoted field");
      fields.push_back(std::move(field));
      return fields;
    }
    char ch = static_cast<char>(c);
    if (quoted) {
      if (ch == '"') {
        if (in_.peek() == '"') {
          in_.get();
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        if (ch == '\n') ++line_;
        field += ch;
      }
      continue;
    }
    switch (ch) {
      case '"':
        if (field.empty() && !field_was_quoted) {
          quoted = true;
          field_was_quoted = true;
        } else {
          field += ch;  // stray quote inside an unquoted field, kept verbatim
        }
        break;
      case ',':
        fields.push_back(std::move(field));
        field.clear();
        field_was_quoted = false;
        break;
      case '\r':
        if (in_.peek() == '\n') break;
        field += ch;
        break;
      case '\n':
        ++line_;
        fields.push_back(std::move(field));
        return fields;
      default:
        field += ch;
    }
  }
}

}  // namespace codemix::csv
