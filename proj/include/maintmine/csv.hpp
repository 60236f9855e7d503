#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "maintmine/error.hpp"

namespace maintmine::csv {

struct Record {
  std::size_t line = 0; // 1-based line where the record starts
  std::vector<std::string> fields;
};

// RFC-4180 reader: quoted fields may contain separators, doubled quotes and
// line breaks. CRLF and LF line endings are both accepted.
class Reader {
public:
  explicit Reader(std::istream &in) : in_(in) {}

  std::optional<Record> next() {
    Record rec;
    rec.line = line_;
    std::string field;
    bool in_quotes = false;
    bool quoted = false;
    bool any = false;
    int ch;
    while ((ch = in_.get()) != EOF) {
      any = true;
      char c = static_cast<char>(ch);
      if (in_quotes) {
        if (c == '"') {
          if (in_.peek() == '"') {
            in_.get();
            field.push_back('"');
          } else {
            in_quotes = false;
          }
        } else {
          if (c == '\n')
            ++line_;
          field.push_back(c);
        }
        continue;
      }
      if (c == '"') {
        if (!field.empty() || quoted)
          throw ParseError(line_, "unexpected quote inside unquoted field");
        in_quotes = quoted = true;
      } else if (c == ',') {
        rec.fields.push_back(std::move(field));
        field.clear();
        quoted = false;
      } else if (c == '\r') {
        // swallowed; the following '\n' terminates the record
      } else if (c == '\n') {
        ++line_;
        rec.fields.push_back(std::move(field));
        return rec;
      } else {
        if (quoted)
          throw ParseError(line_, "characters after closing quote");
        field.push_back(c);
      }
    }
    if (in_quotes)
      throw ParseError(rec.line, "unterminated quoted field");
    if (!any)
      return std::nullopt;
    rec.fields.push_back(std::move(field));
    return rec;
  }

private:
  std::istream &in_;
  std::size_t line_ = 1;
};

inline std::string quote(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos)
    return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"')
      out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

inline void write_row(std::ostream &out, const std::vector<std::string> &fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i)
      out << ',';
    out << quote(fields[i]);
  }
  out << '\n';
}

} // namespace maintmine::csv
