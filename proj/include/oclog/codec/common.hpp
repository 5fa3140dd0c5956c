#pragma once
// Shared codec machinery: format ids, warnings, and the JSON <-> value
// mapping used by every JSON-backed format.

#include <array>
#include <cctype>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "oclog/errors.hpp"
#include "oclog/model.hpp"

namespace oclog::codec {

using Json = nlohmann::ordered_json;

enum class FormatId { Ocel1Json, Ocel2Json, DocelTables, RocelJson };

inline constexpr std::array<FormatId, 4> kAllFormats = {FormatId::Ocel1Json, FormatId::Ocel2Json,
                                                        FormatId::DocelTables, FormatId::RocelJson};

inline const char* to_string(FormatId f) {
  switch (f) {
    case FormatId::Ocel1Json: return "OCEL1_JSON";
    case FormatId::Ocel2Json: return "OCEL2_JSON";
    case FormatId::DocelTables: return "DOCEL_TABLES";
    case FormatId::RocelJson: return "ROCEL_JSON";
  }
  return "";
}

// Short names used on the command line.
inline const char* short_name(FormatId f) {
  switch (f) {
    case FormatId::Ocel1Json: return "ocel1";
    case FormatId::Ocel2Json: return "ocel2";
    case FormatId::DocelTables: return "docel";
    case FormatId::RocelJson: return "rocel";
  }
  return "";
}

inline std::optional<FormatId> format_from_string(std::string name) {
  for (auto& c : name) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (name == "ocel1" || name == "ocel1_json" || name == "ocel 1.0") return FormatId::Ocel1Json;
  if (name == "ocel2" || name == "ocel2_json" || name == "ocel 2.0") return FormatId::Ocel2Json;
  if (name == "docel" || name == "docel_tables") return FormatId::DocelTables;
  if (name == "rocel" || name == "rocel_json") return FormatId::RocelJson;
  return std::nullopt;
}

struct CodecWarning {
  std::string code;      // e.g. W_AMBIGUOUS_TARGET
  std::string location;  // path within the document
  std::string message;

  bool operator==(const CodecWarning&) const = default;
};

inline constexpr const char* kWarnAmbiguousTarget = "W_AMBIGUOUS_TARGET";
inline constexpr const char* kWarnTzNormalized = "W_TZ_NORMALIZED";
inline constexpr const char* kWarnNonChronologicalChange = "W_NONCHRONOLOGICAL_CHANGE";
inline constexpr const char* kWarnUncausedChangeSkipped = "W_UNCAUSED_CHANGE_SKIPPED";
inline constexpr const char* kWarnDuplicateE2oCollapsed = "W_DUPLICATE_E2O_COLLAPSED";

struct ReadOptions {
  // Overrides the document's recorded strictness when set; otherwise the
  // document decides, defaulting to lax.
  std::optional<Mode> mode;

  Mode effective(std::optional<Mode> document_mode) const {
    if (mode) return *mode;
    return document_mode.value_or(Mode::Lax);
  }
};

// --------------------------------------------------------------------------
// JSON <-> AttributeValue
// --------------------------------------------------------------------------

// Timestamps serialize as ISO strings; whether a string comes back as a
// timestamp is decided by the declared kind (when given) or by membership
// of the attribute name in the document's time-attribute hint list.
inline Json value_to_json(const AttributeValue& v) {
  switch (v.kind()) {
    case ValueKind::Null: return nullptr;
    case ValueKind::Boolean: return v.as_bool();
    case ValueKind::Integer: return v.as_int();
    case ValueKind::Real: return v.as_real();
    case ValueKind::Text: return v.as_text();
    case ValueKind::Time: return v.as_time().to_iso();
    case ValueKind::List: {
      Json arr = Json::array();
      for (const auto& e : v.as_list()) arr.push_back(value_to_json(e));
      return arr;
    }
    case ValueKind::Map: {
      Json obj = Json::object();
      for (const auto& [k, e] : v.as_map()) obj[k] = value_to_json(e);
      return obj;
    }
  }
  return nullptr;
}

inline AttributeValue value_from_json(const Json& j, const std::string& location,
                                      bool expect_time = false, int depth = 1) {
  if (depth > AttributeValue::kMaxDepth)
    throw CodecError(CodecError::What::MalformedDocument, location, "value nesting too deep");
  switch (j.type()) {
    case Json::value_t::null: return AttributeValue();
    case Json::value_t::boolean: return AttributeValue(j.get<bool>());
    case Json::value_t::number_integer: return AttributeValue(j.get<std::int64_t>());
    case Json::value_t::number_unsigned: {
      const auto u = j.get<std::uint64_t>();
      if (u > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
        throw CodecError(CodecError::What::MalformedDocument, location, "integer out of range");
      return AttributeValue(static_cast<std::int64_t>(u));
    }
    case Json::value_t::number_float: return AttributeValue(j.get<double>());
    case Json::value_t::string: {
      const auto& s = j.get_ref<const std::string&>();
      if (expect_time) {
        if (auto t = Timestamp::parse(s)) return AttributeValue(*t);
      }
      return AttributeValue(s);
    }
    case Json::value_t::array: {
      AttributeValue::List list;
      for (const auto& e : j) list.push_back(value_from_json(e, location, false, depth + 1));
      return AttributeValue(std::move(list));
    }
    case Json::value_t::object: {
      AttributeValue::Map map;
      for (const auto& [k, e] : j.items()) map[k] = value_from_json(e, location, false, depth + 1);
      return AttributeValue(std::move(map));
    }
    default:
      throw CodecError(CodecError::What::MalformedDocument, location, "unsupported JSON value");
  }
}

// Names of attributes whose values are instants anywhere in the log; written
// into documents whose format cannot type them natively.
inline std::set<std::string> collect_time_attributes(const OCLog& log) {
  std::set<std::string> names;
  auto scan_decl = [&](const std::map<std::string, ValueKind>& decl) {
    for (const auto& [name, kind] : decl)
      if (kind == ValueKind::Time) names.insert(name);
  };
  for (const auto& t : log.object_types()) scan_decl(t.declared_attributes);
  for (const auto& t : log.event_types()) scan_decl(t.declared_attributes);
  for (const auto& o : log.objects()) {
    for (const auto& [name, v] : o.initial_attributes)
      if (v.kind() == ValueKind::Time) names.insert(name);
    for (const auto& c : o.changes)
      if (c.value.kind() == ValueKind::Time) names.insert(c.attribute);
  }
  for (const auto& e : log.events())
    for (const auto& [name, v] : e.attributes)
      if (v.kind() == ValueKind::Time) names.insert(name);
  return names;
}

// --------------------------------------------------------------------------
// Meta helpers
// --------------------------------------------------------------------------

inline Json parse_json(const std::string& bytes, const std::string& what) {
  Json doc = Json::parse(bytes, nullptr, false);
  if (doc.is_discarded())
    throw CodecError(CodecError::What::MalformedDocument, what, "invalid JSON");
  return doc;
}

inline Timestamp parse_timestamp_field(const Json& j, const std::string& location,
                                       std::vector<CodecWarning>* warnings) {
  if (!j.is_string())
    throw CodecError(CodecError::What::MalformedDocument, location, "timestamp must be a string");
  const auto& s = j.get_ref<const std::string&>();
  auto t = Timestamp::parse(s);
  if (!t)
    throw CodecError(CodecError::What::MalformedDocument, location, "unparseable timestamp '" + s + "'");
  if (warnings && s.find('Z') == std::string::npos && s.find('z') == std::string::npos)
    warnings->push_back({kWarnTzNormalized, location, "offset normalized to UTC"});
  return *t;
}

inline const Json* get_if(const Json& j, const char* key) {
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

inline std::string require_string(const Json& j, const char* key, const std::string& location) {
  const Json* v = get_if(j, key);
  if (!v || !v->is_string())
    throw CodecError(CodecError::What::MalformedDocument, location,
                     std::string("missing or non-string '") + key + "'");
  return v->get<std::string>();
}

// Serializes meta fields common to every format.
inline void emit_meta_keys(const OCLog& log, Json& owner, const char* mode_key,
                           const char* reflexive_key) {
  owner[mode_key] = to_string(log.meta().mode);
  if (!log.meta().reflexive_qualifiers.empty()) {
    Json arr = Json::array();
    for (const auto& q : log.meta().reflexive_qualifiers) arr.push_back(q);
    owner[reflexive_key] = arr;
  }
}

inline void read_meta_keys(const Json& owner, const char* mode_key, const char* reflexive_key,
                           LogMeta& meta) {
  if (const Json* m = get_if(owner, mode_key); m && m->is_string())
    meta.mode = m->get<std::string>() == "strict" ? Mode::Strict : Mode::Lax;
  if (const Json* r = get_if(owner, reflexive_key); r && r->is_array())
    for (const auto& q : *r)
      if (q.is_string()) meta.reflexive_qualifiers.insert(q.get<std::string>());
}

}  // namespace oclog::codec
