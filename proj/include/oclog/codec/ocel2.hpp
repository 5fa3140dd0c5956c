#pragma once
// OCEL 2.0 JSON codec and its refined superset (ROCEL). Both share one
// document shape: top-level objectTypes / eventTypes / objects / events.
// The refined dialect adds a "rocel:version" marker, parent links on object
// types, cause keys on attribute entries, validity bounds and causes on
// object relationships, and a meta block; it is the only lossless codec.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "oclog/codec/common.hpp"
#include "oclog/loss.hpp"
#include "oclog/model.hpp"

namespace oclog::codec {

struct DecodeResult {
  OCLog log;
  std::vector<CodecWarning> warnings;
};

struct EncodeResult {
  std::string bytes;
  LossReport loss;
};

namespace detail {

inline constexpr const char* kRocelVersionKey = "rocel:version";
inline constexpr const char* kRocelTimeKey = "rocel:time";
inline constexpr const char* kRocelMapKey = "rocel:map";

// Refined value encoding is self-describing: timestamps are wrapped, and
// literal maps that would collide with a wrapper are escaped.
inline Json refined_value_to_json(const AttributeValue& v) {
  switch (v.kind()) {
    case ValueKind::Time: {
      Json obj = Json::object();
      obj[kRocelTimeKey] = v.as_time().to_iso();
      return obj;
    }
    case ValueKind::List: {
      Json arr = Json::array();
      for (const auto& e : v.as_list()) arr.push_back(refined_value_to_json(e));
      return arr;
    }
    case ValueKind::Map: {
      Json obj = Json::object();
      for (const auto& [k, e] : v.as_map()) obj[k] = refined_value_to_json(e);
      if (v.as_map().count(kRocelTimeKey) || v.as_map().count(kRocelMapKey)) {
        Json wrapped = Json::object();
        wrapped[kRocelMapKey] = std::move(obj);
        return wrapped;
      }
      return obj;
    }
    default:
      return value_to_json(v);
  }
}

inline AttributeValue refined_value_from_json(const Json& j, const std::string& location,
                                              int depth = 1) {
  if (depth > AttributeValue::kMaxDepth)
    throw CodecError(CodecError::What::MalformedDocument, location, "value nesting too deep");
  if (j.is_object()) {
    if (j.size() == 1 && j.contains(kRocelTimeKey) && j[kRocelTimeKey].is_string()) {
      auto t = Timestamp::parse(j[kRocelTimeKey].get<std::string>());
      if (!t)
        throw CodecError(CodecError::What::MalformedDocument, location, "bad wrapped timestamp");
      return AttributeValue(*t);
    }
    const Json* inner = &j;
    if (j.size() == 1 && j.contains(kRocelMapKey) && j[kRocelMapKey].is_object())
      inner = &j[kRocelMapKey];
    AttributeValue::Map map;
    for (const auto& [k, e] : inner->items())
      map[k] = refined_value_from_json(e, location, depth + 1);
    return AttributeValue(std::move(map));
  }
  if (j.is_array()) {
    AttributeValue::List list;
    for (const auto& e : j) list.push_back(refined_value_from_json(e, location, depth + 1));
    return AttributeValue(std::move(list));
  }
  return value_from_json(j, location);
}

inline Json declared_attributes_to_json(const std::map<std::string, ValueKind>& decl) {
  Json arr = Json::array();
  for (const auto& [name, kind] : decl) {
    Json a = Json::object();
    a["name"] = name;
    a["type"] = to_string(kind);
    arr.push_back(std::move(a));
  }
  return arr;
}

inline std::map<std::string, ValueKind> declared_attributes_from_json(const Json& arr,
                                                                      const std::string& where) {
  std::map<std::string, ValueKind> decl;
  if (!arr.is_array())
    throw CodecError(CodecError::What::MalformedDocument, where, "attributes must be an array");
  for (const auto& a : arr) {
    const std::string name = require_string(a, "name", where);
    const std::string kind_name = require_string(a, "type", where);
    auto kind = value_kind_from_string(kind_name);
    if (!kind)
      throw CodecError(CodecError::What::MalformedDocument, where + "/" + name,
                       "unknown value kind '" + kind_name + "'");
    decl[name] = *kind;
  }
  return decl;
}

inline const std::set<std::string> kOcel2KnownKeys = {
    "objectTypes", "eventTypes",     "objects",
    "events",      kRocelVersionKey, "meta",
    "oclog:mode",  "oclog:reflexive-qualifiers", "oclog:time-attributes"};

inline std::string write_ocel2_like(const OCLog& log, bool refined, LossReport* loss) {
  Json doc = Json::object();
  if (refined) doc[kRocelVersionKey] = "1.0";

  Json types = Json::array();
  for (const auto& t : log.object_types()) {
    Json jt = Json::object();
    jt["name"] = t.name;
    if (t.parent) {
      if (refined) {
        jt["parent"] = *t.parent;
      } else if (loss) {
        loss->add({SpecId::S12, {}}, "objectTypes/" + t.name,
                  loss::DroppedParent{t.name, *t.parent});
      }
    }
    jt["attributes"] = declared_attributes_to_json(t.declared_attributes);
    types.push_back(std::move(jt));
  }
  doc["objectTypes"] = std::move(types);

  Json etypes = Json::array();
  for (const auto& t : log.event_types()) {
    Json jt = Json::object();
    jt["name"] = t.name;
    jt["attributes"] = declared_attributes_to_json(t.declared_attributes);
    etypes.push_back(std::move(jt));
  }
  doc["eventTypes"] = std::move(etypes);

  auto encode_value = [&](const AttributeValue& v) {
    return refined ? refined_value_to_json(v) : value_to_json(v);
  };

  Json objects = Json::array();
  for (const auto& o : log.objects()) {
    Json jo = Json::object();
    jo["id"] = o.id;
    jo["type"] = o.type;
    Json attrs = Json::array();
    for (const auto& [name, v] : o.initial_attributes) {
      Json a = Json::object();
      a["name"] = name;
      a["value"] = encode_value(v);
      attrs.push_back(std::move(a));
    }
    for (const auto& c : o.changes) {
      Json a = Json::object();
      a["name"] = c.attribute;
      a["value"] = encode_value(c.value);
      a["time"] = c.at.to_iso();
      if (c.cause) {
        if (refined) {
          a["cause"] = *c.cause;
        } else if (loss) {
          loss->add({SpecId::S16, "traceability"},
                    "objects/" + o.id + "/attributes/" + c.attribute + "@" + c.at.to_iso(),
                    loss::DroppedCause{o.id, c.attribute, c.at, *c.cause});
        }
      }
      attrs.push_back(std::move(a));
    }
    if (!attrs.empty()) jo["attributes"] = std::move(attrs);
    Json rels = Json::array();
    for (const auto& r : o.relations) {
      Json jr = Json::object();
      jr["objectId"] = r.target;
      jr["qualifier"] = r.qualifier;
      const bool bounded = r.valid_from || r.valid_to;
      if (refined) {
        if (r.valid_from) jr["validFrom"] = r.valid_from->to_iso();
        if (r.valid_to) jr["validTo"] = r.valid_to->to_iso();
        if (r.change_cause) jr["cause"] = *r.change_cause;
      } else if (loss) {
        const std::string where = "objects/" + o.id + "/relationships/" + r.qualifier + "/" + r.target;
        if (bounded) {
          // One record restores bounds and cause together.
          loss->add({SpecId::S11, {}}, where, loss::DroppedValidity{r});
        } else if (r.change_cause) {
          loss->add({SpecId::S16, "traceability"}, where,
                    loss::DroppedRelationCause{r.source, r.target, r.qualifier, *r.change_cause});
        }
      }
      rels.push_back(std::move(jr));
    }
    if (!rels.empty()) jo["relationships"] = std::move(rels);
    objects.push_back(std::move(jo));
  }
  doc["objects"] = std::move(objects);

  Json events = Json::array();
  for (const auto& e : log.events()) {
    Json je = Json::object();
    je["id"] = e.id;
    je["type"] = e.activity;
    je["time"] = e.timestamp.to_iso();
    Json attrs = Json::array();
    for (const auto& [name, v] : e.attributes) {
      Json a = Json::object();
      a["name"] = name;
      a["value"] = encode_value(v);
      attrs.push_back(std::move(a));
    }
    if (!attrs.empty()) je["attributes"] = std::move(attrs);
    Json rels = Json::array();
    for (const auto& link : e.e2o) {
      Json jr = Json::object();
      jr["objectId"] = link.object;
      if (link.qualifier) jr["qualifier"] = *link.qualifier;
      rels.push_back(std::move(jr));
    }
    if (!rels.empty()) je["relationships"] = std::move(rels);
    events.push_back(std::move(je));
  }
  doc["events"] = std::move(events);

  if (refined) {
    Json meta = Json::object();
    meta["mode"] = to_string(log.meta().mode);
    if (!log.meta().reflexive_qualifiers.empty()) {
      Json arr = Json::array();
      for (const auto& q : log.meta().reflexive_qualifiers) arr.push_back(q);
      meta["reflexiveQualifiers"] = std::move(arr);
    }
    if (!log.meta().extensions.empty()) {
      Json ext = Json::object();
      for (const auto& [k, text] : log.meta().extensions) ext[k] = parse_json(text, "meta/" + k);
      meta["extensions"] = std::move(ext);
    }
    doc["meta"] = std::move(meta);
  } else {
    emit_meta_keys(log, doc, "oclog:mode", "oclog:reflexive-qualifiers");
    if (auto hints = collect_time_attributes(log); !hints.empty()) {
      Json arr = Json::array();
      for (const auto& n : hints) arr.push_back(n);
      doc["oclog:time-attributes"] = std::move(arr);
    }
    for (const auto& [k, text] : log.meta().extensions) doc[k] = parse_json(text, "extensions/" + k);
  }

  return doc.dump(2) + "\n";
}

inline DecodeResult read_ocel2_like(const std::string& bytes, bool refined, ReadOptions opts) {
  Json doc = parse_json(bytes, refined ? "rocel" : "ocel2");
  if (!doc.is_object())
    throw CodecError(CodecError::What::MalformedDocument, "/", "top level must be an object");
  for (const char* key : {"objectTypes", "eventTypes", "objects", "events"}) {
    const Json* v = get_if(doc, key);
    if (!v || !v->is_array())
      throw CodecError(CodecError::What::MalformedDocument, "/",
                       std::string("missing top-level array '") + key + "'");
  }

  std::vector<CodecWarning> warnings;
  LogMeta meta;
  std::optional<Mode> doc_mode;
  std::set<std::string> time_hints;

  if (refined) {
    if (const Json* m = get_if(doc, "meta"); m && m->is_object()) {
      if (const Json* mm = get_if(*m, "mode"); mm && mm->is_string())
        doc_mode = mm->get<std::string>() == "strict" ? Mode::Strict : Mode::Lax;
      if (const Json* r = get_if(*m, "reflexiveQualifiers"); r && r->is_array())
        for (const auto& q : *r)
          if (q.is_string()) meta.reflexive_qualifiers.insert(q.get<std::string>());
      if (const Json* e = get_if(*m, "extensions"); e && e->is_object())
        for (const auto& [k, v] : e->items()) meta.extensions[k] = v.dump();
    }
  } else {
    if (const Json* m = get_if(doc, "oclog:mode"); m && m->is_string())
      doc_mode = m->get<std::string>() == "strict" ? Mode::Strict : Mode::Lax;
    read_meta_keys(doc, "oclog:mode", "oclog:reflexive-qualifiers", meta);
    if (const Json* h = get_if(doc, "oclog:time-attributes"); h && h->is_array())
      for (const auto& n : *h)
        if (n.is_string()) time_hints.insert(n.get<std::string>());
    for (const auto& [k, v] : doc.items()) {
      if (!kOcel2KnownKeys.count(k)) meta.extensions[k] = v.dump();
    }
  }

  std::vector<ObjectType> otypes;
  for (const auto& jt : doc["objectTypes"]) {
    ObjectType t;
    t.name = require_string(jt, "name", "objectTypes");
    if (refined)
      if (const Json* p = get_if(jt, "parent"); p && p->is_string())
        t.parent = p->get<std::string>();
    if (const Json* a = get_if(jt, "attributes"))
      t.declared_attributes = declared_attributes_from_json(*a, "objectTypes/" + t.name);
    otypes.push_back(std::move(t));
  }
  std::vector<EventType> etypes;
  for (const auto& jt : doc["eventTypes"]) {
    EventType t;
    t.name = require_string(jt, "name", "eventTypes");
    if (const Json* a = get_if(jt, "attributes"))
      t.declared_attributes = declared_attributes_from_json(*a, "eventTypes/" + t.name);
    etypes.push_back(std::move(t));
  }

  auto schema_kind = [&](const std::string& type, const std::string& attr) -> std::optional<ValueKind> {
    auto schema = effective_schema_of(otypes, type);
    auto it = schema.find(attr);
    if (it == schema.end()) return std::nullopt;
    return it->second;
  };
  auto event_kind = [&](const std::string& etype, const std::string& attr) -> std::optional<ValueKind> {
    for (const auto& t : etypes)
      if (t.name == etype) {
        auto it = t.declared_attributes.find(attr);
        if (it != t.declared_attributes.end()) return it->second;
      }
    return std::nullopt;
  };
  auto decode_value = [&](const Json& j, const std::string& where,
                          std::optional<ValueKind> declared, const std::string& name) {
    if (refined) return refined_value_from_json(j, where);
    const bool expect_time =
        (declared && *declared == ValueKind::Time) || time_hints.count(name) > 0;
    return value_from_json(j, where, expect_time);
  };

  std::vector<Object> objects;
  for (const auto& jo : doc["objects"]) {
    Object o;
    o.id = require_string(jo, "id", "objects");
    o.type = require_string(jo, "type", "objects/" + o.id);
    if (const Json* attrs = get_if(jo, "attributes")) {
      for (const auto& a : *attrs) {
        const std::string where = "objects/" + o.id + "/attributes";
        const std::string name = require_string(a, "name", where);
        const Json* value = get_if(a, "value");
        if (!value)
          throw CodecError(CodecError::What::MalformedDocument, where + "/" + name, "missing value");
        auto v = decode_value(*value, where + "/" + name, schema_kind(o.type, name), name);
        if (const Json* time = get_if(a, "time")) {
          AttributeChange c;
          c.attribute = name;
          c.value = std::move(v);
          c.at = parse_timestamp_field(*time, where + "/" + name, &warnings);
          if (refined)
            if (const Json* cause = get_if(a, "cause"); cause && cause->is_string())
              c.cause = cause->get<std::string>();
          o.changes.push_back(std::move(c));
        } else {
          o.initial_attributes[name] = std::move(v);
        }
      }
    }
    if (const Json* rels = get_if(jo, "relationships")) {
      for (const auto& jr : *rels) {
        const std::string where = "objects/" + o.id + "/relationships";
        O2ORelation r;
        r.source = o.id;
        r.target = require_string(jr, "objectId", where);
        if (const Json* q = get_if(jr, "qualifier"); q && q->is_string())
          r.qualifier = q->get<std::string>();
        if (refined) {
          if (const Json* f = get_if(jr, "validFrom"))
            r.valid_from = parse_timestamp_field(*f, where, &warnings);
          if (const Json* t = get_if(jr, "validTo"))
            r.valid_to = parse_timestamp_field(*t, where, &warnings);
          if (const Json* c = get_if(jr, "cause"); c && c->is_string())
            r.change_cause = c->get<std::string>();
        }
        o.relations.push_back(std::move(r));
      }
    }
    objects.push_back(std::move(o));
  }

  std::vector<Event> events;
  for (const auto& je : doc["events"]) {
    Event e;
    e.id = require_string(je, "id", "events");
    e.activity = require_string(je, "type", "events/" + e.id);
    const Json* time = get_if(je, "time");
    if (!time)
      throw CodecError(CodecError::What::MalformedDocument, "events/" + e.id, "missing time");
    e.timestamp = parse_timestamp_field(*time, "events/" + e.id, &warnings);
    if (const Json* attrs = get_if(je, "attributes")) {
      for (const auto& a : *attrs) {
        const std::string where = "events/" + e.id + "/attributes";
        const std::string name = require_string(a, "name", where);
        const Json* value = get_if(a, "value");
        if (!value)
          throw CodecError(CodecError::What::MalformedDocument, where + "/" + name, "missing value");
        e.attributes[name] = decode_value(*value, where + "/" + name, event_kind(e.activity, name), name);
      }
    }
    if (const Json* rels = get_if(je, "relationships")) {
      for (const auto& jr : *rels) {
        E2ORelation link;
        link.object = require_string(jr, "objectId", "events/" + e.id + "/relationships");
        if (const Json* q = get_if(jr, "qualifier"); q && q->is_string() && !q->get<std::string>().empty())
          link.qualifier = q->get<std::string>();
        e.e2o.push_back(std::move(link));
      }
    }
    events.push_back(std::move(e));
  }

  const Mode mode = opts.effective(doc_mode);

  // Changes dated before the object's first related event are suspect:
  // the format records when, but nothing could have caused them yet.
  {
    std::map<std::string, Timestamp> first_seen;
    for (const auto& e : events)
      for (const auto& link : e.e2o) {
        auto it = first_seen.find(link.object);
        if (it == first_seen.end() || e.timestamp < it->second) first_seen[link.object] = e.timestamp;
      }
    for (const auto& o : objects)
      for (const auto& c : o.changes) {
        auto it = first_seen.find(o.id);
        if (it != first_seen.end() && c.at < it->second) {
          const std::string where = "objects/" + o.id + "/attributes/" + c.attribute;
          if (mode == Mode::Strict)
            throw CodecError(CodecError::What::NonChronologicalChange, where,
                             "change precedes the object's first related event");
          warnings.push_back({kWarnNonChronologicalChange, where,
                              "change precedes the object's first related event"});
        }
      }
  }

  meta.mode = mode;
  auto built = build_log(std::move(otypes), std::move(etypes), std::move(objects),
                         std::move(events), mode, std::move(meta));
  if (!built.ok()) {
    bool dangling = false;
    for (const auto& err : built.errors)
      if (err.code == BuildError::Code::DanglingReference) dangling = true;
    throw CodecError(dangling ? CodecError::What::DanglingReference
                              : CodecError::What::MalformedDocument,
                     "/", built.error_summary());
  }
  return {std::move(*built.log), std::move(warnings)};
}

}  // namespace detail

// --------------------------------------------------------------------------
// OCEL 2.0 (timestamp-keyed changes, qualified relations, no validity)
// --------------------------------------------------------------------------

inline DecodeResult read_ocel2(const std::string& bytes, ReadOptions opts = {}) {
  return detail::read_ocel2_like(bytes, /*refined=*/false, opts);
}

inline EncodeResult write_ocel2(const OCLog& log) {
  EncodeResult out;
  out.bytes = detail::write_ocel2_like(log, /*refined=*/false, &out.loss);
  return out;
}

// --------------------------------------------------------------------------
// ROCEL (refined OCEL 2.0; lossless on the canonical model)
// --------------------------------------------------------------------------

inline OCLog read_rocel(const std::string& bytes, ReadOptions opts = {}) {
  return detail::read_ocel2_like(bytes, /*refined=*/true, opts).log;
}

inline std::string write_rocel(const OCLog& log) {
  return detail::write_ocel2_like(log, /*refined=*/true, nullptr);
}

}  // namespace oclog::codec
