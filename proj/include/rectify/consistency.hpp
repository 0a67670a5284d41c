#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "rectify/rule.hpp"

namespace rectify {

/// The four ways two rules can disagree on a tuple they both match.
enum class InconsistencyKind {
  SharedWrongDifferentCorrect = 1,  // same rhs, overlapping wrong patterns, different corrections
  DirectorOfFirstWrongInSecond = 2,
  DirectorOfSecondWrongInFirst = 3,
  MutualDirectorWrong = 4,
};

inline const char* inconsistency_name(InconsistencyKind k) {
  switch (k) {
    case InconsistencyKind::SharedWrongDifferentCorrect: return "shared-wrong-different-correct";
    case InconsistencyKind::DirectorOfFirstWrongInSecond: return "director-of-first-wrong-in-second";
    case InconsistencyKind::DirectorOfSecondWrongInFirst: return "director-of-second-wrong-in-first";
    case InconsistencyKind::MutualDirectorWrong: return "mutual-director-wrong";
  }
  return "?";
}

struct ConsistencyVerdict {
  int rule_i = -1;
  int rule_j = -1;
  bool consistent = true;
  std::optional<InconsistencyKind> condition;
};

struct ResolutionEntry {
  int removed_id = -1;
  int survivor_id = -1;
  InconsistencyKind condition = InconsistencyKind::SharedWrongDifferentCorrect;
  double removed_validity = 0;
  double survivor_validity = 0;
};

using ResolutionLog = std::vector<ResolutionEntry>;

namespace detail {

inline bool shares_wrong_pattern(const Rule& a, const Rule& b) {
  // both sides sorted
  auto i = a.wrong_patterns.begin();
  auto j = b.wrong_patterns.begin();
  while (i != a.wrong_patterns.end() && j != b.wrong_patterns.end()) {
    if (*i == *j) return true;
    if (*i < *j) ++i; else ++j;
  }
  return false;
}

/// Gate: the two rules can match a common tuple when their lhs sets are
/// disjoint, or their directors approximately agree on every shared
/// attribute.
inline bool co_matchable(const Rule& a, const Rule& b, const Thresholds& th) {
  for (const auto& item : a.director) {
    const CellValue* other = b.director_value(item.attribute);
    if (!other) continue;
    if (!approx_match_or_false(item.value, *other, th) &&
        !approx_match_or_false(*other, item.value, th))
      return false;
  }
  return true;  // disjoint lhs sets, or directors agree on every shared attribute
}

}  // namespace detail

/// Checks one ordered pair of rules against the four inconsistency
/// conditions, in numeric order, behind the co-matchability gate.
inline ConsistencyVerdict check_pair(const Rule& ri, const Rule& rj, const Thresholds& th) {
  ConsistencyVerdict v;
  v.rule_i = ri.id;
  v.rule_j = rj.id;
  if (!detail::co_matchable(ri, rj, th)) return v;

  if (ri.fd.rhs == rj.fd.rhs) {
    if (ri.correct_pattern != rj.correct_pattern && detail::shares_wrong_pattern(ri, rj)) {
      v.consistent = false;
      v.condition = InconsistencyKind::SharedWrongDifferentCorrect;
    }
    return v;
  }

  const bool yj_in_xi = ri.fd.lhs_contains(rj.fd.rhs);
  const bool yi_in_xj = rj.fd.lhs_contains(ri.fd.rhs);
  if (yj_in_xi && !yi_in_xj) {
    const CellValue* dp = ri.director_value(rj.fd.rhs);
    if (dp && rj.wrong_contains(*dp)) {
      v.consistent = false;
      v.condition = InconsistencyKind::DirectorOfFirstWrongInSecond;
    }
  } else if (yi_in_xj && !yj_in_xi) {
    const CellValue* dp = rj.director_value(ri.fd.rhs);
    if (dp && ri.wrong_contains(*dp)) {
      v.consistent = false;
      v.condition = InconsistencyKind::DirectorOfSecondWrongInFirst;
    }
  } else if (yi_in_xj && yj_in_xi) {
    const CellValue* dp_i = ri.director_value(rj.fd.rhs);
    const CellValue* dp_j = rj.director_value(ri.fd.rhs);
    if (dp_i && dp_j && rj.wrong_contains(*dp_i) && ri.wrong_contains(*dp_j)) {
      v.consistent = false;
      v.condition = InconsistencyKind::MutualDirectorWrong;
    }
  }
  return v;
}

struct ResolutionResult {
  std::vector<Rule> rules;
  ResolutionLog log;
};

namespace detail {

/// Which of two conflicting rules goes: the lower validity loses; ties fall
/// back to lower support, then to the larger rule id.
inline bool first_loses(const Rule& a, const Rule& b) {
  if (a.validity != b.validity) return a.validity < b.validity;
  if (a.support != b.support) return a.support < b.support;
  return a.id > b.id;
}

}  // namespace detail

/// Single ascending sweep over rule pairs; on a conflict the lower-confidence
/// rule is removed immediately and never revisited. Every pair that survives
/// was checked while both members were alive, so the output is pairwise
/// consistent and re-resolution is a no-op.
inline ResolutionResult resolve_inconsistency(std::vector<Rule> rules, const Thresholds& th) {
  std::sort(rules.begin(), rules.end(), [](const Rule& a, const Rule& b) { return a.id < b.id; });
  std::vector<bool> removed(rules.size(), false);
  ResolutionLog log;

  for (std::size_t i = 0; i < rules.size(); ++i) {
    if (removed[i]) continue;
    for (std::size_t j = i + 1; j < rules.size(); ++j) {
      if (removed[j]) continue;
      const auto verdict = check_pair(rules[i], rules[j], th);
      if (verdict.consistent) continue;
      const bool drop_i = detail::first_loses(rules[i], rules[j]);
      const Rule& loser = drop_i ? rules[i] : rules[j];
      const Rule& winner = drop_i ? rules[j] : rules[i];
      log.push_back({loser.id, winner.id, *verdict.condition, loser.validity, winner.validity});
      removed[drop_i ? i : j] = true;
      if (drop_i) break;
    }
  }

  ResolutionResult out;
  out.log = std::move(log);
  for (std::size_t i = 0; i < rules.size(); ++i)
    if (!removed[i]) out.rules.push_back(std::move(rules[i]));
  return out;
}

inline bool all_pairs_consistent(const std::vector<Rule>& rules, const Thresholds& th) {
  for (std::size_t i = 0; i < rules.size(); ++i)
    for (std::size_t j = i + 1; j < rules.size(); ++j)
      if (!check_pair(rules[i], rules[j], th).consistent) return false;
  return true;
}

}  // namespace rectify
