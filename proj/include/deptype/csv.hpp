#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "deptype/error.hpp"

namespace deptype::csv {

using Row = std::vector<std::string>;

// RFC 4180 reader: quoted fields may contain commas, doubled quotes and
// newlines. Tracks the physical line each row started on for error messages.
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  // Returns false at end of input.
  bool next(Row& row) {
    row.clear();
    int c = in_.get();
    if (c == EOF) return false;
    row_line_ = line_;
    std::string field;
    bool quoted = false;
    bool after_quote = false;
    for (;; c = in_.get()) {
      if (quoted) {
        if (c == EOF) throw DataError("unterminated quoted field starting on line " + std::to_string(row_line_));
        if (c == '"') {
          if (in_.peek() == '"') {
            in_.get();
            field.push_back('"');
          } else {
            quoted = false;
            after_quote = true;
          }
        } else {
          if (c == '\n') ++line_;
          field.push_back(static_cast<char>(c));
        }
        continue;
      }
      if (c == EOF || c == '\n') {
        if (c == '\n') ++line_;
        if (!field.empty() && field.back() == '\r' && !after_quote) field.pop_back();
        row.push_back(std::move(field));
        return true;
      }
      if (c == '\r' && in_.peek() == '\n') continue;
      if (c == ',') {
        row.push_back(std::move(field));
        field.clear();
        after_quote = false;
        continue;
      }
      if (c == '"') {
        if (!field.empty() || after_quote)
          throw DataError("stray quote inside unquoted field on line " + std::to_string(line_));
        quoted = true;
        continue;
      }
      if (after_quote) throw DataError("text after closing quote on line " + std::to_string(line_));
      field.push_back(static_cast<char>(c));
    }
  }

  int row_line() const { return row_line_; }

 private:
  std::istream& in_;
  int line_ = 1;
  int row_line_ = 1;
};

inline std::string quote_field(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos && !field.empty() && field.front() != ' ' &&
      field.back() != ' ')
    return field;
  if (field.empty()) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += "\"\"";
    else out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

inline void write_row(std::ostream& out, const Row& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out << ',';
    out << quote_field(row[i]);
  }
  out << '\n';
}

}  // namespace deptype::csv
