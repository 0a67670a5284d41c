#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "rectify/core.hpp"
#include "rectify/similarity.hpp"

namespace rectify {

struct NotMatching : Error { using Error::Error; };
struct EmptySupport : Error { using Error::Error; };

enum class MatchKind { NoMatch, WrongY, CorrectY };

enum class ActionKind { Rectify, Verify };

struct RepairAction {
  std::int64_t tuple_id = 0;
  int attribute = -1;
  CellValue old_value;
  CellValue new_value;
  int rule_id = -1;
  ActionKind kind = ActionKind::Verify;
};

/// Attributes of one tuple already fixed by an applied rule; they are never
/// written again while that tuple is being repaired.
using VerifiedAttributes = std::set<int>;

/// A matching rectifying rule: tuples whose lhs values approximately match
/// the director pattern and whose rhs value is one of the wrong patterns (or
/// already the correct one) are rewritten to the director and correct values.
struct Rule {
  int id = -1;
  FunctionalDependency fd;
  Pattern director;                        // one entry per fd.lhs attribute, same order
  std::vector<CellValue> wrong_patterns;   // sorted, unique, non-empty
  CellValue correct_pattern;
  double validity = 0;  // correct-pattern share of the director's support
  double support = 0;   // director+correct share of the whole dataset

  const CellValue* director_value(int attribute) const { return pattern_value(director, attribute); }

  bool wrong_contains(const CellValue& v) const {
    return std::binary_search(wrong_patterns.begin(), wrong_patterns.end(), v);
  }

  void validate() const {
    if (fd.lhs.empty()) throw DegenerateFd("rule over an fd with empty lhs");
    if (director.size() != fd.lhs.size()) throw Error("rule director must cover the fd lhs");
    for (std::size_t i = 0; i < director.size(); ++i)
      if (director[i].attribute != fd.lhs[i])
        throw Error("rule director must list lhs attributes in order");
    if (wrong_patterns.empty()) throw Error("rule needs at least one wrong pattern");
    if (!std::is_sorted(wrong_patterns.begin(), wrong_patterns.end()))
      throw Error("rule wrong patterns must be sorted");
    if (std::adjacent_find(wrong_patterns.begin(), wrong_patterns.end()) != wrong_patterns.end())
      throw Error("rule wrong patterns must be unique");
    if (wrong_contains(correct_pattern))
      throw Error("correct pattern also listed as wrong");
    if (validity < 0 || validity > 1 || support < 0 || support > 1 || support > validity)
      throw Error("rule weights out of range");
  }
};

/// Identity-free ordering on what a rule says, used for deterministic
/// tie-breaks that survive relabeling of rule ids.
inline bool rule_content_less(const Rule& a, const Rule& b) {
  if (a.fd.lhs != b.fd.lhs) return a.fd.lhs < b.fd.lhs;
  if (a.fd.rhs != b.fd.rhs) return a.fd.rhs < b.fd.rhs;
  for (std::size_t i = 0; i < a.director.size() && i < b.director.size(); ++i) {
    if (a.director[i].value != b.director[i].value) return a.director[i].value < b.director[i].value;
  }
  if (a.correct_pattern != b.correct_pattern) return a.correct_pattern < b.correct_pattern;
  return a.wrong_patterns < b.wrong_patterns;
}

/// Definition-style matching: the tuple's lhs values must approximately match
/// the director, and its rhs value must be a wrong pattern (WrongY) or equal
/// the correct pattern (CorrectY). Kind mismatches (missing cells) never
/// match.
inline MatchKind match_rule(const Rule& r, const Tuple& t, const Thresholds& th) {
  for (const auto& item : r.director)
    if (!approx_match_or_false(item.value, t.at(item.attribute), th)) return MatchKind::NoMatch;
  const CellValue& y = t.at(r.fd.rhs);
  if (y == r.correct_pattern) return MatchKind::CorrectY;
  if (r.wrong_contains(y)) return MatchKind::WrongY;
  return MatchKind::NoMatch;
}

namespace detail {

/// The guarded update of one rule onto one tuple: the rhs cell first, then
/// the lhs cells; attributes already verified are never touched.
inline void apply_guarded(const Rule& r, Tuple& t, VerifiedAttributes& va,
                          std::vector<RepairAction>& actions) {
  auto write = [&](int attribute, const CellValue& target) {
    CellValue& cell = t.values[static_cast<std::size_t>(attribute)];
    RepairAction a;
    a.tuple_id = t.tuple_id;
    a.attribute = attribute;
    a.old_value = cell;
    a.new_value = target;
    a.rule_id = r.id;
    a.kind = cell == target ? ActionKind::Verify : ActionKind::Rectify;
    cell = target;
    actions.push_back(std::move(a));
  };

  if (!va.count(r.fd.rhs)) {
    write(r.fd.rhs, r.correct_pattern);
    va.insert(r.fd.rhs);
  }
  const bool lhs_all_verified =
      std::all_of(r.fd.lhs.begin(), r.fd.lhs.end(), [&](int a) { return va.count(a) > 0; });
  if (!lhs_all_verified) {
    for (const auto& item : r.director) {
      if (va.count(item.attribute)) continue;
      write(item.attribute, item.value);
      va.insert(item.attribute);
    }
  }
}

}  // namespace detail

struct ApplyOutcome {
  Tuple tuple;
  VerifiedAttributes verified;
  std::vector<RepairAction> actions;
};

/// Applies one matching rule to a tuple under the verified-attribute guards.
/// Throws NotMatching when the tuple does not match the rule at all.
inline ApplyOutcome apply_rule(const Rule& r, const Tuple& t, VerifiedAttributes va,
                               const Thresholds& th) {
  if (match_rule(r, t, th) == MatchKind::NoMatch)
    throw NotMatching("rule " + std::to_string(r.id) + " does not match tuple " +
                      std::to_string(t.tuple_id));
  ApplyOutcome out;
  out.tuple = t;
  out.verified = std::move(va);
  detail::apply_guarded(r, out.tuple, out.verified, out.actions);
  return out;
}

struct Weights {
  double validity = 0;
  double support = 0;
};

/// Frequency weights of a candidate rule, counted with exact equality:
/// validity is the correct-pattern share among tuples carrying the director
/// pattern, support the share of director+correct tuples in the whole set.
inline Weights compute_weights(const Pattern& director, const CellValue& correct,
                               const FunctionalDependency& fd, const Dataset& d) {
  if (director.empty()) throw Error("compute_weights needs a non-empty director");
  std::size_t with_director = 0, with_both = 0;
  for (const auto& t : d.tuples) {
    bool all = true;
    for (const auto& item : director) {
      if (t.at(item.attribute) != item.value) { all = false; break; }
    }
    if (!all) continue;
    ++with_director;
    if (t.at(fd.rhs) == correct) ++with_both;
  }
  if (with_director == 0) throw EmptySupport("director pattern occurs in no tuple");
  Weights w;
  w.validity = static_cast<double>(with_both) / static_cast<double>(with_director);
  w.support = static_cast<double>(with_both) / static_cast<double>(d.tuples.empty() ? 1 : d.tuples.size());
  return w;
}

}  // namespace rectify
