#pragma once

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rectify {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnknownAttribute : Error { using Error::Error; };
struct DegenerateFd : Error { using Error::Error; };
struct ParseFailure : Error { using Error::Error; };
struct KindMismatch : Error { using Error::Error; };

enum class Kind { String, Numeric };

inline const char* kind_name(Kind k) { return k == Kind::String ? "string" : "numeric"; }

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline std::optional<double> parse_number(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const char* begin = text.c_str();
  char* end = nullptr;
  errno = 0;
  double v = std::strtod(begin, &end);
  if (end != begin + text.size() || errno == ERANGE || !std::isfinite(v)) return std::nullopt;
  return v;
}

// Shortest decimal text that parses back to exactly v.
inline std::string format_number(double v) {
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

}  // namespace detail

/// A typed cell: a string or a finite real. Numeric cells keep their original
/// text so files round-trip byte for byte; equality is canonical (numeric
/// cells compare by value, so "1.50" equals "1.5").
class CellValue {
 public:
  CellValue() = default;

  static CellValue str(std::string text) {
    CellValue v;
    v.kind_ = Kind::String;
    v.text_ = std::move(text);
    return v;
  }

  static CellValue num(double value) {
    return num(value, detail::format_number(value));
  }

  static CellValue num(double value, std::string text) {
    if (!std::isfinite(value)) throw ParseFailure("numeric cell must be finite");
    CellValue v;
    v.kind_ = Kind::Numeric;
    v.number_ = value;
    v.text_ = std::move(text);
    return v;
  }

  /// Parses one raw cell, trimming surrounding whitespace. With a declared
  /// kind the text must conform (ParseFailure otherwise); without one,
  /// numeric is inferred when the trimmed text is a real number. Empty text
  /// is always the string "" (a missing cell), whatever the declared kind.
  static CellValue parse(const std::string& raw, std::optional<Kind> declared = std::nullopt) {
    std::string t = detail::trim(raw);
    if (t.empty()) return CellValue();
    if (declared) {
      if (*declared == Kind::String) return str(std::move(t));
      auto v = detail::parse_number(t);
      if (!v) throw ParseFailure("not a number: '" + t + "'");
      return num(*v, std::move(t));
    }
    if (auto v = detail::parse_number(t)) return num(*v, std::move(t));
    return str(std::move(t));
  }

  Kind kind() const { return kind_; }
  const std::string& text() const { return text_; }

  double number() const {
    if (kind_ != Kind::Numeric) throw KindMismatch("number() called on a string cell");
    return number_;
  }

  bool is_empty() const { return kind_ == Kind::String && text_.empty(); }

  friend bool operator==(const CellValue& a, const CellValue& b) {
    if (a.kind_ != b.kind_) return false;
    return a.kind_ == Kind::Numeric ? a.number_ == b.number_ : a.text_ == b.text_;
  }
  friend bool operator!=(const CellValue& a, const CellValue& b) { return !(a == b); }

  friend bool operator<(const CellValue& a, const CellValue& b) {
    if (a.kind_ != b.kind_) return a.kind_ < b.kind_;
    if (a.kind_ == Kind::Numeric) return a.number_ < b.number_;
    return a.text_ < b.text_;
  }

  /// Appends a collision-free encoding, used to build grouping keys.
  void append_key(std::string& out) const {
    if (kind_ == Kind::Numeric) {
      double v = number_ == 0.0 ? 0.0 : number_;  // collapse -0 onto +0
      std::uint64_t bits;
      std::memcpy(&bits, &v, sizeof(bits));
      out.push_back('n');
      out.append(reinterpret_cast<const char*>(&bits), sizeof(bits));
    } else {
      out.push_back('s');
      const auto len = static_cast<std::uint32_t>(text_.size());
      out.append(reinterpret_cast<const char*>(&len), sizeof(len));
      out.append(text_);
    }
  }

 private:
  Kind kind_ = Kind::String;
  std::string text_;
  double number_ = 0.0;
};

inline CellValue parse_cell(const std::string& raw, std::optional<Kind> declared = std::nullopt) {
  return CellValue::parse(raw, declared);
}

struct Attribute {
  int id = -1;
  std::string name;
  Kind kind = Kind::String;
};

struct Schema {
  std::vector<Attribute> attributes;

  int arity() const { return static_cast<int>(attributes.size()); }

  const Attribute& at(int id) const {
    if (id < 0 || id >= arity()) throw UnknownAttribute("attribute id " + std::to_string(id) + " out of range");
    return attributes[static_cast<std::size_t>(id)];
  }

  std::optional<int> find(std::string_view name) const {
    for (const auto& a : attributes)
      if (a.name == name) return a.id;
    return std::nullopt;
  }

  int require(std::string_view name) const {
    if (auto id = find(name)) return *id;
    throw UnknownAttribute("unknown attribute '" + std::string(name) + "'");
  }

  void validate() const {
    if (attributes.empty()) throw Error("schema has no attributes");
    for (int i = 0; i < arity(); ++i) {
      const auto& a = attributes[static_cast<std::size_t>(i)];
      if (a.id != i) throw Error("schema attribute ids must be dense and ordered");
      if (a.name.empty()) throw Error("schema attribute name must be non-empty");
      for (int j = 0; j < i; ++j)
        if (attributes[static_cast<std::size_t>(j)].name == a.name)
          throw Error("duplicate attribute name '" + a.name + "'");
    }
  }

  friend bool operator==(const Schema& a, const Schema& b) {
    if (a.attributes.size() != b.attributes.size()) return false;
    for (std::size_t i = 0; i < a.attributes.size(); ++i) {
      if (a.attributes[i].name != b.attributes[i].name) return false;
      if (a.attributes[i].kind != b.attributes[i].kind) return false;
    }
    return true;
  }
  friend bool operator!=(const Schema& a, const Schema& b) { return !(a == b); }
};

inline Schema make_schema(const std::vector<std::pair<std::string, Kind>>& columns) {
  Schema s;
  int id = 0;
  for (const auto& [name, kind] : columns) s.attributes.push_back({id++, name, kind});
  s.validate();
  return s;
}

struct Tuple {
  std::int64_t tuple_id = 0;
  std::vector<CellValue> values;

  const CellValue& at(int attribute) const {
    if (attribute < 0 || attribute >= static_cast<int>(values.size()))
      throw UnknownAttribute("attribute id " + std::to_string(attribute) + " out of range");
    return values[static_cast<std::size_t>(attribute)];
  }
};

struct Dataset {
  Schema schema;
  std::vector<Tuple> tuples;

  std::size_t size() const { return tuples.size(); }

  void validate() const {
    schema.validate();
    std::vector<std::int64_t> ids;
    ids.reserve(tuples.size());
    for (const auto& t : tuples) {
      if (static_cast<int>(t.values.size()) != schema.arity())
        throw Error("tuple " + std::to_string(t.tuple_id) + " arity mismatch");
      for (int a = 0; a < schema.arity(); ++a) {
        const auto& v = t.values[static_cast<std::size_t>(a)];
        // empty string cells stand for missing values in any column
        if (!v.is_empty() && v.kind() != schema.at(a).kind)
          throw KindMismatch("tuple " + std::to_string(t.tuple_id) + " column '" + schema.at(a).name +
                             "' holds a " + kind_name(v.kind()) + " value in a " +
                             kind_name(schema.at(a).kind) + " column");
      }
      ids.push_back(t.tuple_id);
    }
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) throw Error("duplicate tuple ids");
  }
};

struct FunctionalDependency {
  std::vector<int> lhs;  // strictly increasing attribute ids
  int rhs = -1;

  friend bool operator==(const FunctionalDependency& a, const FunctionalDependency& b) {
    return a.rhs == b.rhs && a.lhs == b.lhs;
  }
  friend bool operator!=(const FunctionalDependency& a, const FunctionalDependency& b) { return !(a == b); }

  bool lhs_contains(int attribute) const {
    return std::binary_search(lhs.begin(), lhs.end(), attribute);
  }

  std::string display(const Schema& s) const {
    std::string out;
    for (std::size_t i = 0; i < lhs.size(); ++i) {
      if (i) out += ",";
      out += s.at(lhs[i]).name;
    }
    out += " -> ";
    out += s.at(rhs).name;
    return out;
  }
};

inline FunctionalDependency make_fd(std::vector<int> lhs, int rhs) {
  std::sort(lhs.begin(), lhs.end());
  lhs.erase(std::unique(lhs.begin(), lhs.end()), lhs.end());
  return FunctionalDependency{std::move(lhs), rhs};
}

/// Checks every FD against the schema and returns the list unchanged. The
/// input order is the canonical iteration order downstream.
inline std::vector<FunctionalDependency> validate_fds(const Schema& schema,
                                                      const std::vector<FunctionalDependency>& fds) {
  for (const auto& fd : fds) {
    if (fd.lhs.empty()) throw DegenerateFd("functional dependency with empty lhs");
    for (std::size_t i = 0; i < fd.lhs.size(); ++i) {
      schema.at(fd.lhs[i]);
      if (i > 0 && fd.lhs[i] <= fd.lhs[i - 1]) throw Error("fd lhs ids must be strictly increasing");
    }
    schema.at(fd.rhs);
    if (fd.lhs_contains(fd.rhs))
      throw DegenerateFd("rhs '" + schema.at(fd.rhs).name + "' appears in its own lhs");
  }
  return fds;
}

struct AttributeValue {
  int attribute = -1;
  CellValue value;

  friend bool operator==(const AttributeValue& a, const AttributeValue& b) {
    return a.attribute == b.attribute && a.value == b.value;
  }
  friend bool operator<(const AttributeValue& a, const AttributeValue& b) {
    if (a.attribute != b.attribute) return a.attribute < b.attribute;
    return a.value < b.value;
  }
};

/// A constant pattern over a set of attributes, kept sorted by attribute id.
using Pattern = std::vector<AttributeValue>;

inline const CellValue* pattern_value(const Pattern& p, int attribute) {
  for (const auto& item : p)
    if (item.attribute == attribute) return &item.value;
  return nullptr;
}

/// One (attribute, value) pair per schema position, in schema order.
inline std::vector<AttributeValue> tuple_pairs(const Tuple& t) {
  std::vector<AttributeValue> out;
  out.reserve(t.values.size());
  for (std::size_t i = 0; i < t.values.size(); ++i)
    out.push_back({static_cast<int>(i), t.values[i]});
  return out;
}

}  // namespace rectify
