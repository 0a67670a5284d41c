#include <catch2/catch.hpp>

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "harness.hpp"
#include "rectify/consistency.hpp"
#include "rectify/discovery.hpp"
#include "rectify/repair.hpp"

using namespace rectify;

namespace {

struct Table1Fixture {
  Dataset dirty = harness::table1();
  Dataset clean = harness::table1_clean();
  std::vector<FunctionalDependency> fds = harness::table1_fds(dirty.schema);
  std::vector<Rule> rules = discover_rules(dirty, fds, 0.6);
  Thresholds th;
};

}  // namespace

TEST_CASE("rule index covers every director pair exactly") {
  Table1Fixture f;
  REQUIRE(f.rules.size() == 1);
  const auto ir = build_rule_index(f.rules);

  const int nation = f.dirty.schema.require("Nation");
  REQUIRE(ir.exact.size() == 1);
  const auto it = ir.exact.find({nation, CellValue::str("China")});
  REQUIRE(it != ir.exact.end());
  CHECK(it->second == std::vector<int>{0});

  CHECK(build_rule_index({}).exact.empty());

  // a two-attribute director lands under two exact keys
  Rule wide;
  wide.id = 7;
  wide.fd = make_fd({0, 1}, 2);
  wide.director = {{0, CellValue::str("a")}, {1, CellValue::str("b")}};
  wide.wrong_patterns = {CellValue::str("z")};
  wide.correct_pattern = CellValue::str("c");
  wide.validity = 1.0;
  wide.support = 0.5;
  const auto ir2 = build_rule_index({wide});
  CHECK(ir2.exact.size() == 2);
  for (const auto& item : wide.director) {
    const auto hit = ir2.exact.find(item);
    REQUIRE(hit != ir2.exact.end());
    CHECK(hit->second == std::vector<int>{7});
  }
}

TEST_CASE("candidates come from exact pairs first, then similar probes") {
  Table1Fixture f;
  const auto ir = build_rule_index(f.rules);

  CHECK(candidate_rules(f.dirty.tuples[1], ir, f.th) == std::set<int>{0});  // t2: exact China
  CHECK(candidate_rules(f.dirty.tuples[5], ir, f.th) == std::set<int>{0});  // t6: Chiena ~ China

  Tuple stranger;
  stranger.tuple_id = 99;
  stranger.values = {CellValue::str("Doe"), CellValue::str("EE"), CellValue::str("Brazil"),
                     CellValue::str("Lima")};
  CHECK(candidate_rules(stranger, ir, f.th).empty());
}

TEST_CASE("get_fd_rules keeps only rules of the probed fd") {
  Table1Fixture f;
  const auto ir = build_rule_index(f.rules);
  const std::set<int> cr = {0};

  CHECK(get_fd_rules(f.fds[0], cr, ir).size() == 1);
  CHECK(get_fd_rules(make_fd({0}, 1), cr, ir).empty());

  // two rules over two fds are partitioned exactly
  auto more = f.rules;
  Rule other;
  other.id = 1;
  other.fd = make_fd({1}, 0);
  other.director = {{1, CellValue::str("CS")}};
  other.wrong_patterns = {CellValue::str("Wuu")};
  other.correct_pattern = CellValue::str("Wu");
  other.validity = 0.9;
  other.support = 0.1;
  more.push_back(other);
  const auto ir2 = build_rule_index(more);
  const std::set<int> both = {0, 1};
  const auto first = get_fd_rules(f.fds[0], both, ir2);
  const auto second = get_fd_rules(other.fd, both, ir2);
  REQUIRE(first.size() == 1);
  REQUIRE(second.size() == 1);
  CHECK(first[0]->id == 0);
  CHECK(second[0]->id == 1);
}

TEST_CASE("find_matching_rules enforces the full definition of matching") {
  Table1Fixture f;
  const auto ir = build_rule_index(f.rules);
  std::vector<const Rule*> fd_rules = {&f.rules[0]};

  CHECK(find_matching_rules(fd_rules, f.dirty.tuples[3], f.th).size() == 1);  // t4 wrong y
  CHECK(find_matching_rules(fd_rules, f.dirty.tuples[2], f.th).size() == 1);  // t3 correct y

  // a wrong capital does not matter when the lhs does not match
  Tuple brazil = f.dirty.tuples[1];
  brazil.values[static_cast<std::size_t>(f.dirty.schema.require("Nation"))] = CellValue::str("Brazil");
  CHECK(find_matching_rules(fd_rules, brazil, f.th).empty());
}

TEST_CASE("filtering prefers the nearest rule, then the higher support") {
  Table1Fixture f;
  const int nation = f.dirty.schema.require("Nation");
  const int capital = f.dirty.schema.require("Capital");

  Rule dirty_director = f.rules[0];
  dirty_director.id = 1;
  dirty_director.director = {{nation, CellValue::str("Chena")}};
  dirty_director.wrong_patterns = {CellValue::str("HongKong")};
  dirty_director.validity = 0.5;
  dirty_director.support = 0.125;

  std::vector<const Rule*> both = {&f.rules[0], &dirty_director};

  // t2's nation is exactly "China": the clean rule is nearer
  CHECK(filter_matching_rules(both, f.dirty.tuples[1])->id == 0);

  // t6's "Chiena" is one edit from both directors: support decides
  CHECK(rule_tuple_distance(f.rules[0].director, f.dirty.tuples[5]) ==
        rule_tuple_distance(dirty_director.director, f.dirty.tuples[5]));
  CHECK(filter_matching_rules(both, f.dirty.tuples[5])->id == 0);

  std::vector<const Rule*> single = {&dirty_director};
  CHECK(filter_matching_rules(single, f.dirty.tuples[1])->id == 1);
  (void)capital;
}

TEST_CASE("repair_tuple fixes t6 and leaves clean tuples verified") {
  Table1Fixture f;
  const auto ir = build_rule_index(f.rules);
  const int nation = f.dirty.schema.require("Nation");
  const int capital = f.dirty.schema.require("Capital");

  const auto t6 = repair_tuple(f.dirty.tuples[5], ir, f.fds, f.th);
  CHECK(t6.tuple.at(nation).text() == "China");
  CHECK(t6.tuple.at(capital).text() == "Beijing");
  CHECK(t6.actions.size() == 2);

  const auto t1 = repair_tuple(f.dirty.tuples[0], ir, f.fds, f.th);
  CHECK(t1.tuple.values == f.dirty.tuples[0].values);
  CHECK(t1.actions.size() == 2);
  for (const auto& a : t1.actions) CHECK(a.kind == ActionKind::Verify);

  Tuple stranger;
  stranger.tuple_id = 99;
  stranger.values = {CellValue::str("Doe"), CellValue::str("EE"), CellValue::str("Brazil"),
                     CellValue::str("Lima")};
  const auto untouched = repair_tuple(stranger, ir, f.fds, f.th);
  CHECK(untouched.tuple.values == stranger.values);
  CHECK(untouched.actions.empty());
}

TEST_CASE("repair_dataset fixes exactly the five injected table-1 errors") {
  Table1Fixture f;
  const auto [repaired, report] = repair_dataset(f.dirty, f.rules, f.fds, f.th);

  CHECK(harness::datasets_equal(repaired, f.clean));
  CHECK(report.rectified == 5);

  // the five rectified cells, by (row, column)
  std::set<std::pair<std::int64_t, int>> fixed;
  for (const auto& a : report.actions)
    if (a.kind == ActionKind::Rectify) fixed.insert({a.tuple_id, a.attribute});
  const int nation = f.dirty.schema.require("Nation");
  const int capital = f.dirty.schema.require("Capital");
  const std::set<std::pair<std::int64_t, int>> expected = {
      {1, capital}, {2, nation}, {3, capital}, {5, nation}, {5, capital}};
  CHECK(fixed == expected);

  REQUIRE(report.per_fd.size() == 1);
  CHECK(report.per_fd[0].rectified == 5);
}

TEST_CASE("repair with no rules is the identity") {
  Table1Fixture f;
  const auto [repaired, report] = repair_dataset(f.dirty, {}, f.fds, f.th);
  CHECK(harness::datasets_equal(repaired, f.dirty));
  CHECK(report.rectified == 0);
  CHECK(report.actions.empty());
}

TEST_CASE("repair_dataset rejects inconsistent rule sets") {
  Table1Fixture f;
  auto conflicting = f.rules;
  Rule clash = f.rules[0];
  clash.id = 1;
  clash.correct_pattern = CellValue::str("Shanghai");
  clash.wrong_patterns = {CellValue::str("HongKong")};
  conflicting.push_back(clash);
  CHECK_THROWS_AS(repair_dataset(f.dirty, conflicting, f.fds, f.th), InconsistentRuleSet);
}

TEST_CASE("repair is idempotent and bounded") {
  Table1Fixture f;
  const auto [repaired, report] = repair_dataset(f.dirty, f.rules, f.fds, f.th);
  const auto [again, report2] = repair_dataset(repaired, f.rules, f.fds, f.th);
  CHECK(harness::datasets_equal(again, repaired));
  CHECK(report2.rectified == 0);

  // per-tuple action count is bounded by twice the arity
  std::map<std::int64_t, int> per_tuple;
  for (const auto& a : report.actions) per_tuple[a.tuple_id]++;
  for (const auto& [id, n] : per_tuple) CHECK(n <= 2 * f.dirty.schema.arity());
}

TEST_CASE("verified attributes never change again within a tuple's repair") {
  Rng rng(20240804);
  for (int i = 0; i < 40; ++i) {
    const auto inst = harness::random_instance(rng, 60, 3);
    const Thresholds th;
    auto rules = discover_rules(inst.data, inst.fds, 0.5);
    auto resolved = resolve_inconsistency(std::move(rules), th);
    const auto [repaired, report] = repair_dataset(inst.data, resolved.rules, inst.fds, th);

    std::map<std::pair<std::int64_t, int>, int> touches;
    for (const auto& a : report.actions) touches[{a.tuple_id, a.attribute}]++;
    for (const auto& [cell, n] : touches) CHECK(n == 1);

    // index property: every director pair of every rule is an exact key
    const auto ir = build_rule_index(resolved.rules);
    for (const auto& r : resolved.rules) {
      for (const auto& item : r.director) {
        const auto hit = ir.exact.find(item);
        REQUIRE(hit != ir.exact.end());
        CHECK(std::find(hit->second.begin(), hit->second.end(), r.id) != hit->second.end());
      }
    }
  }
}

TEST_CASE("repaired output is invariant under rule id relabeling and probe order") {
  Rng rng(20240805);
  int nontrivial = 0;
  for (int i = 0; i < 25; ++i) {
    const auto inst = harness::random_instance(rng, 80, 3);
    const Thresholds th;
    auto resolved = resolve_inconsistency(discover_rules(inst.data, inst.fds, 0.5), th);
    auto rules = resolved.rules;
    if (rules.size() > 1) ++nontrivial;

    const auto [baseline, repb] = repair_dataset(inst.data, rules, inst.fds, th);

    for (int p = 0; p < 4; ++p) {
      auto relabeled = rules;
      // random bijection over ids, plus a shuffled vector order
      std::vector<int> ids(relabeled.size());
      std::iota(ids.begin(), ids.end(), 0);
      for (std::size_t k = ids.size(); k > 1; --k)
        std::swap(ids[k - 1], ids[rng.bounded(k)]);
      for (std::size_t k = 0; k < relabeled.size(); ++k) relabeled[k].id = ids[k];
      for (std::size_t k = relabeled.size(); k > 1; --k)
        std::swap(relabeled[k - 1], relabeled[rng.bounded(k)]);

      const auto [permuted, repp] = repair_dataset(inst.data, relabeled, inst.fds, th);
      REQUIRE(harness::datasets_equal(baseline, permuted));
    }
  }
  CHECK(nontrivial > 0);
}
