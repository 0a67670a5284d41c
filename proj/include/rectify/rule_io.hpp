#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "rectify/core.hpp"
#include "rectify/rule.hpp"

namespace rectify {

struct MalformedRuleFile : Error { using Error::Error; };

namespace detail {

inline nlohmann::json cell_to_json(const CellValue& v) {
  if (v.kind() == Kind::Numeric) return v.number();
  return v.text();
}

inline CellValue cell_from_json(const nlohmann::json& j) {
  if (j.is_number()) return CellValue::num(j.get<double>());
  if (j.is_string()) return CellValue::str(j.get<std::string>());
  throw MalformedRuleFile("cell values must be strings or numbers");
}

}  // namespace detail

/// Renders rules as a JSON document, attributes by name, in rule id order.
inline std::string serialize_rules(const std::vector<Rule>& rules, const Schema& schema) {
  std::vector<const Rule*> ordered;
  ordered.reserve(rules.size());
  for (const auto& r : rules) ordered.push_back(&r);
  std::sort(ordered.begin(), ordered.end(), [](const Rule* a, const Rule* b) { return a->id < b->id; });

  nlohmann::json doc;
  doc["rules"] = nlohmann::json::array();
  for (const Rule* r : ordered) {
    nlohmann::json jr;
    jr["id"] = r->id;
    jr["lhs"] = nlohmann::json::array();
    jr["director"] = nlohmann::json::array();
    for (const auto& item : r->director) {
      jr["lhs"].push_back(schema.at(item.attribute).name);
      jr["director"].push_back(detail::cell_to_json(item.value));
    }
    jr["rhs"] = schema.at(r->fd.rhs).name;
    jr["wrong"] = nlohmann::json::array();
    for (const auto& w : r->wrong_patterns) jr["wrong"].push_back(detail::cell_to_json(w));
    jr["correct"] = detail::cell_to_json(r->correct_pattern);
    jr["w1"] = r->validity;
    jr["w2"] = r->support;
    doc["rules"].push_back(std::move(jr));
  }
  return doc.dump(2) + "\n";
}

/// Parses a rule document against a known schema. Every structural invariant
/// is re-checked; violations raise MalformedRuleFile.
inline std::vector<Rule> deserialize_rules(const std::string& text, const Schema& schema) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw MalformedRuleFile(std::string("bad rule document: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("rules") || !doc["rules"].is_array())
    throw MalformedRuleFile("expected an object with a 'rules' array");

  std::vector<Rule> rules;
  for (const auto& jr : doc["rules"]) {
    try {
      Rule r;
      r.id = jr.at("id").get<int>();
      const auto& lhs_names = jr.at("lhs");
      const auto& director_values = jr.at("director");
      if (!lhs_names.is_array() || !director_values.is_array() ||
          lhs_names.size() != director_values.size() || lhs_names.empty())
        throw MalformedRuleFile("lhs and director must be equal-length non-empty arrays");

      Pattern director;
      std::vector<int> lhs_ids;
      for (std::size_t i = 0; i < lhs_names.size(); ++i) {
        const int attribute = schema.require(lhs_names[i].get<std::string>());
        director.push_back({attribute, detail::cell_from_json(director_values[i])});
        lhs_ids.push_back(attribute);
      }
      std::sort(director.begin(), director.end(),
                [](const AttributeValue& a, const AttributeValue& b) { return a.attribute < b.attribute; });
      r.fd = make_fd(lhs_ids, schema.require(jr.at("rhs").get<std::string>()));
      if (r.fd.lhs.size() != director.size())
        throw MalformedRuleFile("duplicate lhs attribute");
      r.director = std::move(director);

      for (const auto& w : jr.at("wrong")) r.wrong_patterns.push_back(detail::cell_from_json(w));
      std::sort(r.wrong_patterns.begin(), r.wrong_patterns.end());
      r.wrong_patterns.erase(std::unique(r.wrong_patterns.begin(), r.wrong_patterns.end()),
                             r.wrong_patterns.end());
      r.correct_pattern = detail::cell_from_json(jr.at("correct"));
      r.validity = jr.at("w1").get<double>();
      r.support = jr.at("w2").get<double>();
      r.validate();
      rules.push_back(std::move(r));
    } catch (const MalformedRuleFile&) {
      throw;
    } catch (const std::exception& e) {
      throw MalformedRuleFile(std::string("bad rule record: ") + e.what());
    }
  }

  std::vector<int> ids;
  for (const auto& r : rules) ids.push_back(r.id);
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
    throw MalformedRuleFile("duplicate rule id");
  return rules;
}

/// Parses a rule document alone, building a working schema from the
/// attribute names it mentions (kinds follow the JSON value types). Lets the
/// consistency checker run without the data set at hand.
inline std::pair<std::vector<Rule>, Schema> deserialize_rules_with_schema(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw MalformedRuleFile(std::string("bad rule document: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("rules") || !doc["rules"].is_array())
    throw MalformedRuleFile("expected an object with a 'rules' array");

  Schema schema;
  auto add = [&](const std::string& name, Kind kind) {
    for (const auto& a : schema.attributes) {
      if (a.name == name) {
        if (a.kind != kind)
          throw MalformedRuleFile("attribute '" + name + "' used with two kinds");
        return;
      }
    }
    schema.attributes.push_back({static_cast<int>(schema.attributes.size()), name, kind});
  };

  try {
    for (const auto& jr : doc["rules"]) {
      const auto& lhs_names = jr.at("lhs");
      const auto& director_values = jr.at("director");
      for (std::size_t i = 0; i < lhs_names.size() && i < director_values.size(); ++i)
        add(lhs_names[i].get<std::string>(),
            director_values[i].is_number() ? Kind::Numeric : Kind::String);
      add(jr.at("rhs").get<std::string>(),
          jr.at("correct").is_number() ? Kind::Numeric : Kind::String);
    }
  } catch (const MalformedRuleFile&) {
    throw;
  } catch (const std::exception& e) {
    throw MalformedRuleFile(std::string("bad rule record: ") + e.what());
  }
  if (schema.attributes.empty())
    schema.attributes.push_back({0, "_", Kind::String});

  return {deserialize_rules(text, schema), schema};
}

}  // namespace rectify
