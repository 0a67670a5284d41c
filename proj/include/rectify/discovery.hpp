#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "rectify/core.hpp"
#include "rectify/rule.hpp"

namespace rectify {

/// Projection of a dataset onto one fd's lhs and rhs columns, one row per
/// tuple in dataset order.
struct VerticalProjection {
  struct Row {
    std::int64_t tuple_id = 0;
    std::vector<CellValue> lhs;
    CellValue rhs;
  };
  FunctionalDependency fd;
  std::vector<Row> rows;
};

/// Rows grouped by exact lhs pattern, with per-group rhs value frequencies.
/// Groups and their rhs values keep first-occurrence order.
struct PartitionMap {
  struct RhsCount {
    CellValue value;
    int freq = 0;
  };
  struct Entry {
    std::vector<CellValue> lhs;
    std::vector<RhsCount> rhs_counts;
    int total = 0;
  };
  FunctionalDependency fd;
  std::vector<Entry> entries;
};

inline VerticalProjection get_vertical_projection(const Dataset& d, const FunctionalDependency& fd) {
  VerticalProjection vp;
  vp.fd = fd;
  vp.rows.reserve(d.tuples.size());
  for (const auto& t : d.tuples) {
    VerticalProjection::Row row;
    row.tuple_id = t.tuple_id;
    row.lhs.reserve(fd.lhs.size());
    for (const int a : fd.lhs) row.lhs.push_back(t.at(a));
    row.rhs = t.at(fd.rhs);
    vp.rows.push_back(std::move(row));
  }
  return vp;
}

inline PartitionMap get_horizontal_projection(const VerticalProjection& vp) {
  PartitionMap pm;
  pm.fd = vp.fd;
  std::unordered_map<std::string, std::size_t> index;
  index.reserve(vp.rows.size() * 2);
  std::string key;
  for (const auto& row : vp.rows) {
    key.clear();
    for (const auto& v : row.lhs) v.append_key(key);
    auto [it, inserted] = index.try_emplace(key, pm.entries.size());
    if (inserted) {
      PartitionMap::Entry e;
      e.lhs = row.lhs;
      pm.entries.push_back(std::move(e));
    }
    auto& entry = pm.entries[it->second];
    entry.total += 1;
    bool found = false;
    for (auto& rc : entry.rhs_counts) {
      if (rc.value == row.rhs) {
        rc.freq += 1;
        found = true;
        break;
      }
    }
    if (!found) entry.rhs_counts.push_back({row.rhs, 1});
  }
  return pm;
}

namespace detail {

inline bool any_empty(const std::vector<CellValue>& values) {
  for (const auto& v : values)
    if (v.is_empty()) return true;
  return false;
}

/// Turns one partition into a rule, or nothing. Requires at least two
/// distinct rhs values, a strict frequency maximum, a non-empty lhs pattern
/// and correct value, and at least one surviving wrong pattern. Weights come
/// from the partition counts; adoption needs validity >= theta.
inline bool emit_rule(const FunctionalDependency& fd, const PartitionMap::Entry& entry,
                      std::size_t dataset_size, double theta, Rule& out) {
  if (entry.rhs_counts.size() < 2) return false;
  if (any_empty(entry.lhs)) return false;

  int best = -1;
  bool tie = false;
  for (std::size_t i = 0; i < entry.rhs_counts.size(); ++i) {
    const int f = entry.rhs_counts[i].freq;
    if (best < 0 || f > entry.rhs_counts[static_cast<std::size_t>(best)].freq) {
      best = static_cast<int>(i);
      tie = false;
    } else if (f == entry.rhs_counts[static_cast<std::size_t>(best)].freq) {
      tie = true;
    }
  }
  if (tie) return false;  // no frequency evidence either way

  const auto& correct = entry.rhs_counts[static_cast<std::size_t>(best)];
  if (correct.value.is_empty()) return false;

  std::vector<CellValue> wrong;
  for (const auto& rc : entry.rhs_counts) {
    if (rc.freq < correct.freq && !rc.value.is_empty()) wrong.push_back(rc.value);
  }
  if (wrong.empty()) return false;
  std::sort(wrong.begin(), wrong.end());

  Rule r;
  r.fd = fd;
  r.director.reserve(fd.lhs.size());
  for (std::size_t i = 0; i < fd.lhs.size(); ++i) r.director.push_back({fd.lhs[i], entry.lhs[i]});
  r.wrong_patterns = std::move(wrong);
  r.correct_pattern = correct.value;
  r.validity = static_cast<double>(correct.freq) / static_cast<double>(entry.total);
  r.support = static_cast<double>(correct.freq) / static_cast<double>(dataset_size);
  if (r.validity < theta) return false;
  out = std::move(r);
  return true;
}

}  // namespace detail

/// Discovers rules from the data itself: for every fd, tuples are grouped by
/// exact lhs pattern; in each group with disagreeing rhs values the strictly
/// most frequent one is taken as correct and the rarer ones as wrong. Rule
/// ids follow (fd order, first occurrence of the lhs pattern).
inline std::vector<Rule> discover_rules(const Dataset& d,
                                        const std::vector<FunctionalDependency>& fds,
                                        double theta) {
  std::vector<Rule> rules;
  int next_id = 0;
  for (const auto& fd : fds) {
    const auto vp = get_vertical_projection(d, fd);
    const auto pm = get_horizontal_projection(vp);
    for (const auto& entry : pm.entries) {
      Rule r;
      if (!detail::emit_rule(fd, entry, d.tuples.size(), theta, r)) continue;
      r.id = next_id++;
      r.validate();
      rules.push_back(std::move(r));
    }
  }
  return rules;
}

}  // namespace rectify
