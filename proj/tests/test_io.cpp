#include <catch2/catch.hpp>

#include <cstdio>

#include "harness.hpp"
#include "rectify/discovery.hpp"
#include "rectify/io.hpp"
#include "rectify/noise.hpp"
#include "rectify/rule_io.hpp"

using namespace rectify;

TEST_CASE("table 1 loads as eight tuples over four string columns") {
  const auto d = harness::table1();
  CHECK(d.tuples.size() == 8);
  CHECK(d.schema.arity() == 4);
  for (const auto& a : d.schema.attributes) CHECK(a.kind == Kind::String);
  CHECK(d.tuples[1].at(d.schema.require("Capital")).text() == "HongKong");
}

TEST_CASE("csv quoting, escaping and trimming") {
  const std::string text =
      "A,B\n"
      "\"a,b\",  padded  \n"
      "\"quote\"\"inside\",\"multi\nline\"\n"
      ",\n";
  const auto d = parse_csv(text);
  REQUIRE(d.tuples.size() == 3);
  CHECK(d.tuples[0].at(0).text() == "a,b");
  CHECK(d.tuples[0].at(1).text() == "padded");  // unquoted fields are trimmed
  CHECK(d.tuples[1].at(0).text() == "quote\"inside");
  CHECK(d.tuples[1].at(1).text() == "multi\nline");
  CHECK(d.tuples[2].at(0).is_empty());

  CHECK_THROWS_AS(parse_csv("A,B\nonly_one\n"), RaggedRow);
  CHECK_THROWS_AS(parse_csv(""), MalformedCsv);
  CHECK_THROWS_AS(parse_csv("A,B\n\"open,x\n"), MalformedCsv);
}

TEST_CASE("numeric columns are inferred, with declared kinds as override") {
  const std::string text = "Id,Score,Note\n1,3.5,ok\n2,4,fine\n3,,\n";
  const auto d = parse_csv(text);
  CHECK(d.schema.at(0).kind == Kind::Numeric);
  CHECK(d.schema.at(1).kind == Kind::Numeric);  // empty cells do not block inference
  CHECK(d.schema.at(2).kind == Kind::String);
  CHECK(d.tuples[0].at(1).number() == 3.5);
  CHECK(d.tuples[2].at(1).is_empty());

  const auto forced = parse_csv(text, {{"Id", Kind::String}});
  CHECK(forced.schema.at(0).kind == Kind::String);
  CHECK(forced.tuples[0].at(0).text() == "1");

  CHECK_THROWS_AS(parse_csv("A\nx\n", {{"A", Kind::Numeric}}), ParseFailure);
}

TEST_CASE("datasets survive a save/load round trip") {
  Rng rng(20240807);
  for (int i = 0; i < 25; ++i) {
    auto inst = harness::random_instance(rng, 40, 1);
    // salt in the awkward cases: quotes, separators, newlines, padding
    if (!inst.data.tuples.empty()) {
      auto& t = inst.data.tuples[0];
      for (std::size_t a = 0; a < t.values.size(); ++a) {
        if (inst.data.schema.at(static_cast<int>(a)).kind == Kind::String) {
          t.values[a] = CellValue::str("a,\"b\"\nc ");
          break;
        }
      }
    }
    std::map<std::string, Kind> kinds;
    for (const auto& a : inst.data.schema.attributes) kinds[a.name] = a.kind;
    const auto back = parse_csv(render_csv(inst.data), kinds);
    REQUIRE(harness::datasets_equal(back, inst.data));
  }
}

TEST_CASE("fd files parse, expand and preserve order") {
  const auto schema = make_schema({{"ZIP", Kind::String},
                                   {"State", Kind::String},
                                   {"City", Kind::String},
                                   {"Phone", Kind::String}});
  const auto fds = parse_fd_text("# comment\nZIP -> State, City\nPhone -> ZIP\n", schema);
  REQUIRE(fds.size() == 3);
  CHECK(fds[0] == make_fd({0}, 1));
  CHECK(fds[1] == make_fd({0}, 2));
  CHECK(fds[2] == make_fd({3}, 0));

  CHECK(parse_fd_text("# nothing\n\n", schema).empty());
  CHECK_THROWS_AS(parse_fd_text("-> City\n", schema), FdSyntaxError);
  CHECK_THROWS_AS(parse_fd_text("ZIP ->\n", schema), FdSyntaxError);
  CHECK_THROWS_AS(parse_fd_text("ZIP City\n", schema), FdSyntaxError);
  CHECK_THROWS_AS(parse_fd_text("Avenue -> City\n", schema), UnknownAttribute);
  CHECK_THROWS_AS(parse_fd_text("ZIP -> ZIP\n", schema), DegenerateFd);
}

TEST_CASE("rule files round-trip every field") {
  const auto d = harness::table1();
  const auto fds = harness::table1_fds(d.schema);
  const auto rules = discover_rules(d, fds, 0.6);
  REQUIRE(rules.size() == 1);

  const auto text = serialize_rules(rules, d.schema);
  const auto back = deserialize_rules(text, d.schema);
  REQUIRE(back.size() == 1);
  CHECK(back[0].id == rules[0].id);
  CHECK(back[0].fd == rules[0].fd);
  CHECK(back[0].director == rules[0].director);
  CHECK(back[0].wrong_patterns == rules[0].wrong_patterns);
  CHECK(back[0].correct_pattern == rules[0].correct_pattern);
  CHECK(back[0].validity == rules[0].validity);
  CHECK(back[0].support == rules[0].support);

  CHECK(deserialize_rules(serialize_rules({}, d.schema), d.schema).empty());
}

TEST_CASE("rule files round-trip numeric patterns and weights exactly") {
  const auto schema = make_schema({{"ZIP", Kind::Numeric}, {"City", Kind::String}});
  Rule r;
  r.id = 3;
  r.fd = make_fd({0}, 1);
  r.director = {{0, CellValue::num(94107.0)}};
  r.wrong_patterns = {CellValue::str("Oakland")};
  r.correct_pattern = CellValue::str("SanFrancisco");
  r.validity = 2.0 / 3.0;
  r.support = 1.0 / 3.0;

  const auto back = deserialize_rules(serialize_rules({r}, schema), schema);
  REQUIRE(back.size() == 1);
  CHECK(back[0].director[0].value.kind() == Kind::Numeric);
  CHECK(back[0].director[0].value.number() == 94107.0);
  CHECK(back[0].validity == 2.0 / 3.0);

  // schema-free loading rebuilds attribute kinds from the value types
  const auto [rules2, inferred] = deserialize_rules_with_schema(serialize_rules({r}, schema));
  REQUIRE(rules2.size() == 1);
  CHECK(inferred.at(0).kind == Kind::Numeric);
  CHECK(inferred.at(1).kind == Kind::String);
}

TEST_CASE("run configuration bounds are enforced") {
  RunConfig config;
  CHECK_NOTHROW(config.validate());
  config.theta = 1.2;
  CHECK_THROWS(config.validate());
  config.theta = 0.6;
  config.thresholds.string_threshold = -1;
  CHECK_THROWS(config.validate());
  config.thresholds.string_threshold = 2;
  config.noise_rate = -0.1;
  CHECK_THROWS(config.validate());
}

TEST_CASE("malformed rule files are rejected") {
  const auto d = harness::table1();
  CHECK_THROWS_AS(deserialize_rules("not json", d.schema), MalformedRuleFile);
  CHECK_THROWS_AS(deserialize_rules("{}", d.schema), MalformedRuleFile);

  // the correct pattern may not be listed among the wrong patterns
  const std::string bad = R"({"rules":[{"id":0,"lhs":["Nation"],"director":["China"],
    "rhs":"Capital","wrong":["Beijing"],"correct":"Beijing","w1":0.5,"w2":0.25}]})";
  CHECK_THROWS_AS(deserialize_rules(bad, d.schema), MalformedRuleFile);

  const std::string unknown = R"({"rules":[{"id":0,"lhs":["Planet"],"director":["Mars"],
    "rhs":"Capital","wrong":["x"],"correct":"y","w1":0.5,"w2":0.25}]})";
  CHECK_THROWS_AS(deserialize_rules(unknown, d.schema), MalformedRuleFile);

  const std::string bad_weights = R"({"rules":[{"id":0,"lhs":["Nation"],"director":["China"],
    "rhs":"Capital","wrong":["x"],"correct":"y","w1":0.2,"w2":0.9}]})";
  CHECK_THROWS_AS(deserialize_rules(bad_weights, d.schema), MalformedRuleFile);
}
