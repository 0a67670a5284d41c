#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "rectify/core.hpp"

namespace rectify {

/// Matching thresholds. Comparisons are strict: a pattern matches a value
/// when its distance is strictly below the applicable threshold. The numeric
/// threshold is absolute when set; otherwise it defaults to a fraction of the
/// pattern's magnitude with a small floor, so columns of any scale work.
struct Thresholds {
  double string_threshold = 2.0;             // edit-distance units
  std::optional<double> numeric_threshold;   // absolute, in value units
  double numeric_relative = 1e-3;
  double numeric_floor = 1e-9;

  double numeric_for(const CellValue& pattern) const {
    if (numeric_threshold) return *numeric_threshold;
    return std::max(numeric_relative * std::fabs(pattern.number()), numeric_floor);
  }

  void validate() const {
    if (string_threshold < 0 || (numeric_threshold && *numeric_threshold < 0) ||
        numeric_relative < 0 || numeric_floor < 0)
      throw Error("thresholds must be non-negative");
  }
};

namespace detail {

// Decodes UTF-8 into code points; a malformed byte stands for itself.
inline std::vector<char32_t> decode_utf8(std::string_view s) {
  std::vector<char32_t> out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    std::size_t len = 1;
    char32_t cp = b0;
    if (b0 >= 0xF0) len = 4;
    else if (b0 >= 0xE0) len = 3;
    else if (b0 >= 0xC0) len = 2;
    if (len > 1 && i + len <= s.size()) {
      char32_t acc = b0 & (0x7F >> len);
      bool ok = true;
      for (std::size_t k = 1; k < len; ++k) {
        const auto bk = static_cast<unsigned char>(s[i + k]);
        if ((bk & 0xC0) != 0x80) { ok = false; break; }
        acc = (acc << 6) | (bk & 0x3F);
      }
      if (ok) {
        out.push_back(acc);
        i += len;
        continue;
      }
    }
    out.push_back(cp);
    ++i;
  }
  return out;
}

template <typename Seq>
std::size_t levenshtein(const Seq& a, const Seq& b) {
  const std::size_t n = a.size(), m = b.size();
  if (n == 0) return m;
  if (m == 0) return n;
  std::vector<std::size_t> row(m + 1);
  for (std::size_t j = 0; j <= m; ++j) row[j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t save = row[j];
      if (a[i - 1] == b[j - 1]) {
        row[j] = diag;
      } else {
        row[j] = 1 + std::min({diag, row[j], row[j - 1]});
      }
      diag = save;
    }
  }
  return row[m];
}

inline bool is_ascii(std::string_view s) {
  for (const char c : s)
    if (static_cast<unsigned char>(c) >= 0x80) return false;
  return true;
}

}  // namespace detail

/// Unit-cost Levenshtein distance over code points.
inline std::size_t edit_distance(std::string_view a, std::string_view b) {
  if (a == b) return 0;
  if (detail::is_ascii(a) && detail::is_ascii(b)) return detail::levenshtein(a, b);
  return detail::levenshtein(detail::decode_utf8(a), detail::decode_utf8(b));
}

inline double euclidean_distance(double a, double b) { return std::fabs(a - b); }

/// Distance between two cells of the same kind: edit distance for strings,
/// absolute difference for numerics.
inline double sim(const CellValue& a, const CellValue& b) {
  if (a.kind() != b.kind())
    throw KindMismatch("sim() over mixed kinds (" + std::string(kind_name(a.kind())) + " vs " +
                       kind_name(b.kind()) + ")");
  if (a.kind() == Kind::Numeric) return euclidean_distance(a.number(), b.number());
  return static_cast<double>(edit_distance(a.text(), b.text()));
}

/// True when the value lies strictly within the pattern's threshold.
inline bool approx_match(const CellValue& pattern, const CellValue& value, const Thresholds& th) {
  if (pattern.kind() != value.kind())
    throw KindMismatch("approx_match() over mixed kinds");
  const double limit = pattern.kind() == Kind::Numeric ? th.numeric_for(pattern) : th.string_threshold;
  return sim(pattern, value) < limit;
}

/// Same test, but a kind mismatch (e.g. a missing cell in a numeric column)
/// is simply not a match.
inline bool approx_match_or_false(const CellValue& pattern, const CellValue& value, const Thresholds& th) {
  if (pattern.kind() != value.kind()) return false;
  return approx_match(pattern, value, th);
}

/// Componentwise approximate match of a pattern against a tuple. An empty
/// pattern matches vacuously.
inline bool pattern_match(const Pattern& dp, const Tuple& t, const Thresholds& th) {
  for (const auto& item : dp)
    if (!approx_match(item.value, t.at(item.attribute), th)) return false;
  return true;
}

/// Sum of componentwise distances between a director pattern and a tuple.
/// Callers establish the match first; components must agree in kind.
inline double rule_tuple_distance(const Pattern& dp, const Tuple& t) {
  double total = 0;
  for (const auto& item : dp) total += sim(item.value, t.at(item.attribute));
  return total;
}

}  // namespace rectify
