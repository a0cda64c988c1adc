#ifndef MINER_SCHEMA_HPP
#define MINER_SCHEMA_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "miner/errors.hpp"

namespace miner {

/// Validator for the subset of JSON Schema draft-07 the report schema uses:
/// type, enum, const, properties, required, additionalProperties (boolean),
/// items, minItems, minimum, oneOf. Unknown keywords are ignored, like a
/// real validator would.
namespace detail {

inline bool schema_type_matches(const std::string& type,
                                const nlohmann::json& v) {
  if (type == "object") return v.is_object();
  if (type == "array") return v.is_array();
  if (type == "string") return v.is_string();
  if (type == "number") return v.is_number();
  if (type == "integer")
    return v.is_number_integer() || v.is_number_unsigned();
  if (type == "boolean") return v.is_boolean();
  if (type == "null") return v.is_null();
  return false;
}

inline void schema_validate_at(const nlohmann::json& schema,
                               const nlohmann::json& value,
                               const std::string& path,
                               std::vector<std::string>& errors) {
  if (!schema.is_object()) return;

  if (schema.contains("type")) {
    const auto& t = schema["type"];
    bool ok = false;
    if (t.is_string()) {
      ok = schema_type_matches(t.get<std::string>(), value);
    } else if (t.is_array()) {
      for (const auto& alt : t)
        if (alt.is_string() && schema_type_matches(alt.get<std::string>(), value)) {
          ok = true;
          break;
        }
    }
    if (!ok) {
      errors.push_back(path + ": wrong type, expected " + t.dump());
      return;  // further checks would only cascade
    }
  }

  if (schema.contains("enum")) {
    bool ok = false;
    for (const auto& alt : schema["enum"])
      if (alt == value) {
        ok = true;
        break;
      }
    if (!ok) errors.push_back(path + ": value not in enum " + schema["enum"].dump());
  }

  if (schema.contains("const") && schema["const"] != value)
    errors.push_back(path + ": value differs from const " +
                     schema["const"].dump());

  if (schema.contains("minimum") && value.is_number() &&
      value.get<double>() < schema["minimum"].get<double>())
    errors.push_back(path + ": below minimum " + schema["minimum"].dump());

  if (schema.contains("oneOf")) {
    std::size_t hits = 0;
    for (const auto& alt : schema["oneOf"]) {
      std::vector<std::string> sub;
      schema_validate_at(alt, value, path, sub);
      if (sub.empty()) ++hits;
    }
    if (hits != 1)
      errors.push_back(path + ": matched " + std::to_string(hits) +
                       " oneOf branches, wanted exactly 1");
  }

  if (value.is_object()) {
    const nlohmann::json* props =
        schema.contains("properties") ? &schema["properties"] : nullptr;
    if (schema.contains("required"))
      for (const auto& key : schema["required"])
        if (!value.contains(key.get<std::string>()))
          errors.push_back(path + ": missing required key \"" +
                           key.get<std::string>() + "\"");
    if (props)
      for (auto it = props->begin(); it != props->end(); ++it)
        if (value.contains(it.key()))
          schema_validate_at(it.value(), value[it.key()],
                             path + "/" + it.key(), errors);
    if (schema.contains("additionalProperties") &&
        schema["additionalProperties"].is_boolean() &&
        !schema["additionalProperties"].get<bool>())
      for (auto it = value.begin(); it != value.end(); ++it)
        if (!props || !props->contains(it.key()))
          errors.push_back(path + ": unexpected key \"" + it.key() + "\"");
  }

  if (value.is_array()) {
    if (schema.contains("minItems") &&
        value.size() < schema["minItems"].get<std::size_t>())
      errors.push_back(path + ": fewer than " + schema["minItems"].dump() +
                       " items");
    if (schema.contains("items")) {
      std::size_t i = 0;
      for (const auto& item : value) {
        schema_validate_at(schema["items"], item,
                           path + "/" + std::to_string(i), errors);
        ++i;
      }
    }
  }
}

}  // namespace detail

inline std::vector<std::string> schema_validate(const nlohmann::json& schema,
                                                const nlohmann::json& value) {
  std::vector<std::string> errors;
  detail::schema_validate_at(schema, value, "#", errors);
  return errors;
}

inline void schema_check(const nlohmann::json& schema,
                         const nlohmann::json& value,
                         const std::string& what) {
  auto errors = schema_validate(schema, value);
  if (errors.empty()) return;
  std::string msg = what + " does not match its schema:";
  for (const auto& e : errors) msg += "\n  " + e;
  throw ValidationError(msg);
}

}  // namespace miner

#endif  // MINER_SCHEMA_HPP
