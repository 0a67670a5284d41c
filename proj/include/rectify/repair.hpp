#pragma once

#include <map>
#include <set>
#include <unordered_map>
#include <vector>

#include "rectify/consistency.hpp"
#include "rectify/core.hpp"
#include "rectify/rule.hpp"

namespace rectify {

struct InconsistentRuleSet : Error { using Error::Error; };

/// Lookup structure over a rule set: an exact map from (attribute, director
/// value) pairs to rule ids, plus a per-attribute listing of director values
/// for similarity probes when an exact lookup comes up empty.
struct RuleIndex {
  std::map<AttributeValue, std::vector<int>> exact;
  std::map<int, std::vector<std::pair<CellValue, int>>> by_attribute;
  std::unordered_map<int, const Rule*> by_id;

  const Rule& rule(int id) const {
    auto it = by_id.find(id);
    if (it == by_id.end()) throw Error("unknown rule id " + std::to_string(id));
    return *it->second;
  }
};

/// Indexes every rule under one exact key per lhs attribute. The rule
/// objects must outlive the index.
inline RuleIndex build_rule_index(const std::vector<Rule>& rules) {
  RuleIndex ir;
  for (const auto& r : rules) {
    ir.by_id.emplace(r.id, &r);
    for (const auto& item : r.director) {
      ir.exact[item].push_back(r.id);
      ir.by_attribute[item.attribute].push_back({item.value, r.id});
    }
  }
  return ir;
}

/// Candidate rules for a tuple: for every attribute-value pair, rules whose
/// director carries that exact pair; if none do, rules whose director value
/// on that attribute approximately matches.
inline std::set<int> candidate_rules(const Tuple& t, const RuleIndex& ir, const Thresholds& th) {
  std::set<int> cr;
  for (const auto& pair : tuple_pairs(t)) {
    auto exact = ir.exact.find(pair);
    if (exact != ir.exact.end() && !exact->second.empty()) {
      cr.insert(exact->second.begin(), exact->second.end());
      continue;
    }
    auto listing = ir.by_attribute.find(pair.attribute);
    if (listing == ir.by_attribute.end()) continue;
    for (const auto& [director_value, rule_id] : listing->second)
      if (approx_match_or_false(director_value, pair.value, th)) cr.insert(rule_id);
  }
  return cr;
}

/// Candidates restricted to one fd (same lhs set and rhs), in rule id order.
inline std::vector<const Rule*> get_fd_rules(const FunctionalDependency& fd, const std::set<int>& cr,
                                             const RuleIndex& ir) {
  std::vector<const Rule*> out;
  for (const int id : cr) {
    const Rule& r = ir.rule(id);
    if (r.fd == fd) out.push_back(&r);
  }
  return out;
}

/// Rules of one fd that the tuple matches in the full sense: approximate lhs
/// match and a wrong-or-correct rhs value.
inline std::vector<const Rule*> find_matching_rules(const std::vector<const Rule*>& fd_rules,
                                                    const Tuple& t, const Thresholds& th) {
  std::vector<const Rule*> out;
  for (const Rule* r : fd_rules)
    if (match_rule(*r, t, th) != MatchKind::NoMatch) out.push_back(r);
  return out;
}

/// Keeps the matching rule closest to the tuple; distance ties fall back to
/// the higher support, then to rule content so the choice is stable under
/// any relabeling of rule ids.
inline const Rule* filter_matching_rules(const std::vector<const Rule*>& matching, const Tuple& t) {
  if (matching.empty()) throw Error("filter_matching_rules over an empty set");
  const Rule* best = matching.front();
  double best_distance = rule_tuple_distance(best->director, t);
  for (std::size_t i = 1; i < matching.size(); ++i) {
    const Rule* r = matching[i];
    const double dist = rule_tuple_distance(r->director, t);
    if (dist < best_distance ||
        (dist == best_distance &&
         (r->support > best->support ||
          (r->support == best->support && rule_content_less(*r, *best))))) {
      best = r;
      best_distance = dist;
    }
  }
  return best;
}

struct TupleRepair {
  Tuple tuple;
  VerifiedAttributes verified;
  std::vector<RepairAction> actions;
};

/// Repairs one tuple: candidate retrieval, then per-fd matching, filtering
/// and guarded application, in fd order. Matching and distances are judged
/// against the incoming tuple; updates accumulate into the repaired copy.
inline TupleRepair repair_tuple(const Tuple& t, const RuleIndex& ir,
                                const std::vector<FunctionalDependency>& fds, const Thresholds& th) {
  TupleRepair out;
  out.tuple = t;
  const std::set<int> cr = candidate_rules(t, ir, th);
  if (cr.empty()) return out;
  for (const auto& fd : fds) {
    const auto fd_rules = get_fd_rules(fd, cr, ir);
    if (fd_rules.empty()) continue;
    const auto matching = find_matching_rules(fd_rules, t, th);
    if (matching.empty()) continue;
    const Rule* chosen = filter_matching_rules(matching, t);
    detail::apply_guarded(*chosen, out.tuple, out.verified, out.actions);
  }
  return out;
}

struct FdBreakdown {
  FunctionalDependency fd;
  int rectified = 0;
  int verified = 0;
};

struct RepairReport {
  std::vector<RepairAction> actions;  // tuple order, then application order
  int rectified = 0;
  int verified = 0;
  std::vector<FdBreakdown> per_fd;  // fd iteration order
};

/// Repairs every tuple independently; the output keeps the input tuple
/// order. The rule set is re-checked pairwise first and rejected when any
/// conflict remains.
inline std::pair<Dataset, RepairReport> repair_dataset(const Dataset& d,
                                                       const std::vector<Rule>& rules,
                                                       const std::vector<FunctionalDependency>& fds,
                                                       const Thresholds& th) {
  if (!all_pairs_consistent(rules, th))
    throw InconsistentRuleSet("rule set fails the pairwise consistency check");

  const RuleIndex ir = build_rule_index(rules);

  RepairReport report;
  for (const auto& fd : fds) report.per_fd.push_back({fd, 0, 0});

  Dataset repaired;
  repaired.schema = d.schema;
  repaired.tuples.reserve(d.tuples.size());
  for (const auto& t : d.tuples) {
    TupleRepair r = repair_tuple(t, ir, fds, th);
    for (const auto& action : r.actions) {
      if (action.kind == ActionKind::Rectify) ++report.rectified; else ++report.verified;
      const FunctionalDependency& rule_fd = ir.rule(action.rule_id).fd;
      for (auto& bucket : report.per_fd) {
        if (bucket.fd == rule_fd) {
          if (action.kind == ActionKind::Rectify) ++bucket.rectified; else ++bucket.verified;
          break;
        }
      }
      report.actions.push_back(action);
    }
    repaired.tuples.push_back(std::move(r.tuple));
  }
  return {std::move(repaired), std::move(report)};
}

}  // namespace rectify
