#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rectify/consistency.hpp"
#include "rectify/core.hpp"
#include "rectify/repair.hpp"
#include "rectify/similarity.hpp"

namespace rectify {

struct MalformedCsv : Error { using Error::Error; };
struct RaggedRow : Error { using Error::Error; };
struct FdSyntaxError : Error { using Error::Error; };

namespace detail {

/// Splits CSV text into rows of raw fields. Quoted fields may contain
/// commas, quotes (doubled) and newlines; unquoted fields are used verbatim.
/// Returns fields plus a flag telling whether each was quoted.
struct CsvField {
  std::string text;
  bool quoted = false;
};

inline std::vector<std::vector<CsvField>> split_csv(const std::string& content) {
  std::vector<std::vector<CsvField>> rows;
  std::vector<CsvField> row;
  CsvField field;
  std::size_t i = 0;
  bool in_quotes = false;
  bool row_started = false;

  auto end_field = [&]() {
    row.push_back(std::move(field));
    field = CsvField{};
  };
  auto end_row = [&]() {
    end_field();
    rows.push_back(std::move(row));
    row.clear();
    row_started = false;
  };

  while (i < content.size()) {
    const char c = content[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < content.size() && content[i + 1] == '"') {
          field.text.push_back('"');
          i += 2;
          continue;
        }
        in_quotes = false;
        ++i;
        continue;
      }
      field.text.push_back(c);
      ++i;
      continue;
    }
    if (c == '"' && field.text.empty() && !field.quoted) {
      in_quotes = true;
      field.quoted = true;
      row_started = true;
      ++i;
      continue;
    }
    if (c == ',') {
      end_field();
      row_started = true;
      ++i;
      continue;
    }
    if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < content.size() && content[i + 1] == '\n') ++i;
      ++i;
      if (row_started || !field.text.empty() || field.quoted || !row.empty()) end_row();
      continue;
    }
    field.text.push_back(c);
    row_started = true;
    ++i;
  }
  if (in_quotes) throw MalformedCsv("unterminated quoted field");
  if (row_started || !field.text.empty() || field.quoted || !row.empty()) end_row();
  return rows;
}

inline bool needs_quoting(const std::string& s) {
  if (s.empty()) return false;
  if (std::isspace(static_cast<unsigned char>(s.front())) ||
      std::isspace(static_cast<unsigned char>(s.back())))
    return true;
  return s.find_first_of(",\"\n\r") != std::string::npos;
}

inline void write_csv_field(std::string& out, const std::string& s) {
  if (!needs_quoting(s)) {
    out += s;
    return;
  }
  out.push_back('"');
  for (const char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path + "'");
  out << content;
  if (!out) throw Error("write to '" + path + "' failed");
}

}  // namespace detail

/// Parses CSV text into a dataset. The first row names the attributes; cell
/// kinds follow the declared map where given, otherwise a column is numeric
/// when all of its non-empty cells parse as numbers. Unquoted cells are
/// trimmed; tuple ids are row positions.
inline Dataset parse_csv(const std::string& content,
                         const std::map<std::string, Kind>& declared = {}) {
  const auto rows = detail::split_csv(content);
  if (rows.empty()) throw MalformedCsv("no header row");

  Schema schema;
  for (std::size_t i = 0; i < rows[0].size(); ++i) {
    const std::string name = rows[0][i].quoted ? rows[0][i].text : detail::trim(rows[0][i].text);
    schema.attributes.push_back({static_cast<int>(i), name, Kind::String});
  }
  schema.validate();

  const std::size_t arity = rows[0].size();
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != arity)
      throw RaggedRow("row " + std::to_string(r + 1) + " has " + std::to_string(rows[r].size()) +
                      " fields, expected " + std::to_string(arity));
  }

  // column kinds: declared wins, else inferred over non-empty cells
  for (auto& attribute : schema.attributes) {
    auto it = declared.find(attribute.name);
    if (it != declared.end()) {
      attribute.kind = it->second;
      continue;
    }
    bool any = false, all_numeric = true;
    for (std::size_t r = 1; r < rows.size() && all_numeric; ++r) {
      const auto& f = rows[r][static_cast<std::size_t>(attribute.id)];
      const std::string text = f.quoted ? f.text : detail::trim(f.text);
      if (text.empty()) continue;
      any = true;
      if (!detail::parse_number(text)) all_numeric = false;
    }
    attribute.kind = (any && all_numeric) ? Kind::Numeric : Kind::String;
  }

  Dataset d;
  d.schema = schema;
  d.tuples.reserve(rows.size() - 1);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    Tuple t;
    t.tuple_id = static_cast<std::int64_t>(r - 1);
    t.values.reserve(arity);
    for (std::size_t c = 0; c < arity; ++c) {
      const auto& f = rows[r][c];
      const std::string text = f.quoted ? f.text : detail::trim(f.text);
      const Kind kind = schema.attributes[c].kind;
      if (text.empty()) {
        t.values.push_back(CellValue());
      } else if (kind == Kind::Numeric) {
        const auto v = detail::parse_number(text);
        if (!v)
          throw ParseFailure("row " + std::to_string(r + 1) + " column '" +
                             schema.attributes[c].name + "': not a number: '" + text + "'");
        t.values.push_back(CellValue::num(*v, text));
      } else {
        t.values.push_back(CellValue::str(text));
      }
    }
    d.tuples.push_back(std::move(t));
  }
  d.validate();
  return d;
}

inline Dataset load_csv(const std::string& path, const std::map<std::string, Kind>& declared = {}) {
  return parse_csv(detail::read_file(path), declared);
}

inline std::string render_csv(const Dataset& d) {
  std::string out;
  for (int a = 0; a < d.schema.arity(); ++a) {
    if (a) out.push_back(',');
    detail::write_csv_field(out, d.schema.at(a).name);
  }
  out.push_back('\n');
  for (const auto& t : d.tuples) {
    const std::size_t start = out.size();
    for (std::size_t c = 0; c < t.values.size(); ++c) {
      if (c) out.push_back(',');
      detail::write_csv_field(out, t.values[c].text());
    }
    if (out.size() == start) out += "\"\"";  // a fully empty row must not vanish on reload
    out.push_back('\n');
  }
  return out;
}

inline void save_csv(const Dataset& d, const std::string& path) {
  detail::write_file(path, render_csv(d));
}

/// Parses an fd spec: one `A1,A2 -> B1,B2` per line, names from the schema,
/// comment lines starting with '#'. A multi-attribute right side expands
/// into one fd per attribute. Line order is the canonical fd order.
inline std::vector<FunctionalDependency> parse_fd_text(const std::string& content,
                                                       const Schema& schema) {
  std::vector<FunctionalDependency> fds;
  std::istringstream in(content);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string trimmed = detail::trim(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    const auto arrow = trimmed.find("->");
    if (arrow == std::string::npos)
      throw FdSyntaxError("line " + std::to_string(line_no) + ": expected 'A,B -> C'");

    auto split_names = [&](const std::string& side) {
      std::vector<std::string> names;
      std::string name;
      std::istringstream parts(side);
      while (std::getline(parts, name, ',')) {
        name = detail::trim(name);
        if (!name.empty()) names.push_back(name);
      }
      return names;
    };

    const auto lhs_names = split_names(trimmed.substr(0, arrow));
    const auto rhs_names = split_names(trimmed.substr(arrow + 2));
    if (lhs_names.empty())
      throw FdSyntaxError("line " + std::to_string(line_no) + ": empty left side");
    if (rhs_names.empty())
      throw FdSyntaxError("line " + std::to_string(line_no) + ": empty right side");

    std::vector<int> lhs;
    for (const auto& n : lhs_names) lhs.push_back(schema.require(n));
    for (const auto& n : rhs_names) fds.push_back(make_fd(lhs, schema.require(n)));
  }
  return validate_fds(schema, fds);
}

inline std::vector<FunctionalDependency> parse_fd_file(const std::string& path, const Schema& schema) {
  return parse_fd_text(detail::read_file(path), schema);
}

struct RunConfig {
  double theta = 0.6;
  Thresholds thresholds;
  std::uint64_t seed = 42;
  double noise_rate = 0.10;
  double typo_rate = 0.5;

  void validate() const {
    if (theta < 0 || theta > 1) throw Error("theta must lie in [0,1]");
    thresholds.validate();
    if (noise_rate < 0 || noise_rate > 1 || typo_rate < 0 || typo_rate > 1)
      throw Error("noise rates must lie in [0,1]");
  }
};

inline std::string render_resolution_log(const ResolutionLog& log) {
  std::string out;
  char line[160];
  for (const auto& e : log) {
    std::snprintf(line, sizeof(line), "removed=%d survivor=%d condition=%s w1_removed=%g w1_survivor=%g\n",
                  e.removed_id, e.survivor_id, inconsistency_name(e.condition),
                  e.removed_validity, e.survivor_validity);
    out += line;
  }
  return out;
}

inline std::string render_repair_report(const RepairReport& report, const Schema& schema) {
  std::string out = "rectified=" + std::to_string(report.rectified) +
                    " verified=" + std::to_string(report.verified) + "\n";
  for (const auto& b : report.per_fd) {
    out += "fd " + b.fd.display(schema) + ": rectified=" + std::to_string(b.rectified) +
           " verified=" + std::to_string(b.verified) + "\n";
  }
  for (const auto& a : report.actions) {
    out += (a.kind == ActionKind::Rectify ? "rectify" : "verify");
    out += " tuple=" + std::to_string(a.tuple_id) + " attr=" + schema.at(a.attribute).name +
           " old=" + a.old_value.text() + " new=" + a.new_value.text() +
           " rule=" + std::to_string(a.rule_id) + "\n";
  }
  return out;
}

}  // namespace rectify
