#ifndef MINER_CSV_HPP
#define MINER_CSV_HPP

#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "miner/errors.hpp"

namespace miner {

struct CsvRecord {
  std::vector<std::string> fields;
  std::size_t line = 0;  // physical line where the record starts (1-based)
};

/// RFC-4180 reader: quoted fields may contain commas, quotes ("" escapes)
/// and newlines. CRLF and LF both accepted.
inline std::vector<CsvRecord> parse_csv(std::istream& in) {
  std::vector<CsvRecord> records;
  CsvRecord rec;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t line = 1;
  rec.line = 1;

  auto end_field = [&] {
    rec.fields.push_back(field);
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    // skip records that are a single empty field (blank lines)
    if (!(rec.fields.size() == 1 && rec.fields[0].empty()))
      records.push_back(rec);
    rec = CsvRecord{};
    rec.line = line;
  };

  char c;
  while (in.get(c)) {
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field.empty() && !field_started) {
          in_quotes = true;
          field_started = true;
        } else {
          field.push_back('"');  // stray quote mid-field, keep verbatim
        }
        break;
      case ',':
        end_field();
        break;
      case '\r':
        break;
      case '\n':
        ++line;
        end_record();
        rec.line = line;
        break;
      default:
        field_started = true;
        field.push_back(c);
    }
  }
  if (in_quotes) throw ParseError("unterminated quoted CSV field");
  if (field_started || !field.empty() || !rec.fields.empty()) end_record();
  return records;
}

inline std::string csv_quote(std::string_view field) {
  bool needs = field.find_first_of(",\"\r\n") != std::string_view::npos;
  if (!needs) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

inline std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out.push_back(',');
    out += csv_quote(fields[i]);
  }
  out.push_back('\n');
  return out;
}

}  // namespace miner

#endif  // MINER_CSV_HPP
