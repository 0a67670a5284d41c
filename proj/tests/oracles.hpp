// Independent reference implementations the tests check the library
// against. These deliberately avoid the library's own computation paths:
// the edit distance is the full-matrix recurrence, discovery groups rows by
// linear scanning instead of hashing, and the accuracy oracle recounts cell
// diffs directly.
#pragma once

#include <string_view>
#include <vector>

#include "rectify/core.hpp"
#include "rectify/discovery.hpp"
#include "rectify/rule.hpp"
#include "rectify/similarity.hpp"

namespace oracle {

inline std::size_t edit_distance(std::string_view a, std::string_view b) {
  const auto sa = rectify::detail::decode_utf8(a);
  const auto sb = rectify::detail::decode_utf8(b);
  const std::size_t n = sa.size(), m = sb.size();
  std::vector<std::vector<std::size_t>> dp(n + 1, std::vector<std::size_t>(m + 1));
  for (std::size_t i = 0; i <= n; ++i) dp[i][0] = i;
  for (std::size_t j = 0; j <= m; ++j) dp[0][j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t sub = dp[i - 1][j - 1] + (sa[i - 1] == sb[j - 1] ? 0 : 1);
      const std::size_t del = dp[i - 1][j] + 1;
      const std::size_t ins = dp[i][j - 1] + 1;
      dp[i][j] = std::min({sub, del, ins});
    }
  }
  return dp[n][m];
}

/// Same contract as rectify::discover_rules, computed by naive quadratic
/// grouping with no hash map, and weights recounted by full scans.
inline std::vector<rectify::Rule> brute_force_discover(
    const rectify::Dataset& d, const std::vector<rectify::FunctionalDependency>& fds, double theta) {
  std::vector<rectify::Rule> rules;
  int next_id = 0;
  for (const auto& fd : fds) {
    struct Group {
      std::vector<rectify::CellValue> lhs;
      std::vector<std::size_t> rows;
    };
    std::vector<Group> groups;
    for (std::size_t i = 0; i < d.tuples.size(); ++i) {
      std::vector<rectify::CellValue> key;
      for (const int a : fd.lhs) key.push_back(d.tuples[i].at(a));
      bool placed = false;
      for (auto& g : groups) {
        if (g.lhs == key) {
          g.rows.push_back(i);
          placed = true;
          break;
        }
      }
      if (!placed) groups.push_back({std::move(key), {i}});
    }

    for (const auto& g : groups) {
      std::vector<std::pair<rectify::CellValue, int>> counts;
      for (const auto row : g.rows) {
        const auto& y = d.tuples[row].at(fd.rhs);
        bool found = false;
        for (auto& c : counts) {
          if (c.first == y) {
            ++c.second;
            found = true;
            break;
          }
        }
        if (!found) counts.emplace_back(y, 1);
      }
      if (counts.size() < 2) continue;

      bool lhs_has_empty = false;
      for (const auto& v : g.lhs) lhs_has_empty = lhs_has_empty || v.is_empty();
      if (lhs_has_empty) continue;

      std::size_t best = 0;
      for (std::size_t k = 1; k < counts.size(); ++k)
        if (counts[k].second > counts[best].second) best = k;
      int max_count = 0;
      for (const auto& c : counts) max_count += c.second == counts[best].second ? 1 : 0;
      if (max_count != 1) continue;
      if (counts[best].first.is_empty()) continue;

      std::vector<rectify::CellValue> wrong;
      for (const auto& c : counts)
        if (c.second < counts[best].second && !c.first.is_empty()) wrong.push_back(c.first);
      if (wrong.empty()) continue;
      std::sort(wrong.begin(), wrong.end());

      rectify::Rule r;
      r.fd = fd;
      for (std::size_t k = 0; k < fd.lhs.size(); ++k) r.director.push_back({fd.lhs[k], g.lhs[k]});
      r.wrong_patterns = std::move(wrong);
      r.correct_pattern = counts[best].first;
      const auto w = rectify::compute_weights(r.director, r.correct_pattern, fd, d);
      if (w.validity < theta) continue;
      r.validity = w.validity;
      r.support = w.support;
      r.id = next_id++;
      rules.push_back(std::move(r));
    }
  }
  return rules;
}

inline bool rules_equal(const rectify::Rule& a, const rectify::Rule& b) {
  return a.id == b.id && a.fd == b.fd && a.director == b.director &&
         a.wrong_patterns == b.wrong_patterns && a.correct_pattern == b.correct_pattern &&
         a.validity == b.validity && a.support == b.support;
}

inline bool rule_sets_equal(const std::vector<rectify::Rule>& a, const std::vector<rectify::Rule>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!rules_equal(a[i], b[i])) return false;
  return true;
}

struct CellDiffCounts {
  int rectified = 0;
  int correct = 0;
  int wrong = 0;
};

/// Direct recount of the cell-level diff between the three datasets.
inline CellDiffCounts cell_diff(const rectify::Dataset& repaired, const rectify::Dataset& dirty,
                                const rectify::Dataset& clean) {
  CellDiffCounts c;
  for (std::size_t i = 0; i < clean.tuples.size(); ++i) {
    for (std::size_t a = 0; a < clean.tuples[i].values.size(); ++a) {
      const auto& rv = repaired.tuples[i].values[a];
      const auto& dv = dirty.tuples[i].values[a];
      const auto& cv = clean.tuples[i].values[a];
      if (!(dv == cv)) ++c.wrong;
      if (!(rv == dv)) {
        ++c.rectified;
        if (rv == cv) ++c.correct;
      }
    }
  }
  return c;
}

}  // namespace oracle
