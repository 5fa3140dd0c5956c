#pragma once
// OCEL 1.0 JSON codec: an events table and an objects table. The format
// stores no object relations, no qualifiers, and no traceable attribute
// changes; writing itemizes everything it has to drop. Schema and mode
// hints ride along under "oclog:" keys so nothing is lost silently.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "oclog/codec/common.hpp"
#include "oclog/codec/ocel2.hpp"
#include "oclog/loss.hpp"
#include "oclog/model.hpp"

namespace oclog::codec {

namespace detail {

inline const std::set<std::string> kOcel1KnownKeys = {
    "ocel:global-log", "ocel:global-event", "ocel:global-object", "ocel:events", "ocel:objects"};

// Collapses an event's links to unqualified, deduplicated object ids and
// records every dropped qualifier. Per object the single written bare link
// represents the original bare link when one exists, otherwise the first
// qualified one (whose record then re-qualifies it on restore); all other
// qualified links are recorded as collapsed and re-appended on restore.
inline std::vector<std::string> unqualified_omap(const Event& e, LossReport* loss,
                                                 const std::string& where) {
  std::vector<std::string> omap;
  std::map<std::string, std::vector<const E2ORelation*>> groups;
  for (const auto& link : e.e2o) {
    if (!groups.count(link.object)) omap.push_back(link.object);
    groups[link.object].push_back(&link);
  }
  if (loss) {
    for (const auto& id : omap) {
      const auto& group = groups[id];
      bool has_bare = false;
      for (const auto* link : group)
        if (!link->qualifier) has_bare = true;
      bool represented = has_bare;  // one original link survives as the bare entry
      for (const auto* link : group) {
        if (!link->qualifier) continue;
        const bool collapsed = represented;
        represented = true;
        loss->add({SpecId::S10, {}}, where + "/" + id + "[" + *link->qualifier + "]",
                  loss::DroppedQualifier{e.id, id, *link->qualifier, collapsed});
      }
    }
  }
  return omap;
}

}  // namespace detail

inline EncodeResult write_ocel1(const OCLog& log) {
  EncodeResult out;
  LossReport& loss = out.loss;

  Json global = Json::object();
  global["ocel:version"] = "1.0";
  global["ocel:ordering"] = "timestamp";
  {
    std::set<std::string> attr_names;
    for (const auto& o : log.objects())
      for (const auto& [name, v] : o.initial_attributes) attr_names.insert(name);
    for (const auto& e : log.events())
      for (const auto& [name, v] : e.attributes) attr_names.insert(name);
    Json arr = Json::array();
    for (const auto& n : attr_names) arr.push_back(n);
    global["ocel:attribute-names"] = std::move(arr);
  }
  {
    Json arr = Json::array();
    for (const auto& t : log.object_types()) arr.push_back(t.name);
    global["ocel:object-types"] = std::move(arr);
  }
  emit_meta_keys(log, global, "oclog:mode", "oclog:reflexive-qualifiers");
  if (auto hints = collect_time_attributes(log); !hints.empty()) {
    Json arr = Json::array();
    for (const auto& n : hints) arr.push_back(n);
    global["oclog:time-attributes"] = std::move(arr);
  }
  {
    // Declared schemas; OCEL 1.0 itself has no such section, so they are
    // carried as forward-compatible hints keyed by type name.
    Json okinds = Json::object();
    for (const auto& t : log.object_types()) {
      Json m = Json::object();
      for (const auto& [name, kind] : t.declared_attributes) m[name] = to_string(kind);
      okinds[t.name] = std::move(m);
      if (t.parent)
        loss.add({SpecId::S12, {}}, "object-types/" + t.name,
                 loss::DroppedParent{t.name, *t.parent});
    }
    global["oclog:object-attribute-kinds"] = std::move(okinds);
    Json ekinds = Json::object();
    for (const auto& t : log.event_types()) {
      Json m = Json::object();
      for (const auto& [name, kind] : t.declared_attributes) m[name] = to_string(kind);
      ekinds[t.name] = std::move(m);
    }
    global["oclog:event-attribute-kinds"] = std::move(ekinds);
  }

  Json doc = Json::object();
  doc["ocel:global-log"] = std::move(global);
  doc["ocel:global-event"] = Json::object({{"ocel:activity", "__INVALID__"}});
  doc["ocel:global-object"] = Json::object({{"ocel:type", "__INVALID__"}});

  Json events = Json::object();
  for (const auto& e : log.events()) {
    Json je = Json::object();
    je["ocel:activity"] = e.activity;
    je["ocel:timestamp"] = e.timestamp.to_iso();
    Json omap = Json::array();
    for (const auto& id : detail::unqualified_omap(e, &loss, "events/" + e.id))
      omap.push_back(id);
    je["ocel:omap"] = std::move(omap);
    Json vmap = Json::object();
    for (const auto& [name, v] : e.attributes) vmap[name] = value_to_json(v);
    je["ocel:vmap"] = std::move(vmap);
    events[e.id] = std::move(je);
  }
  doc["ocel:events"] = std::move(events);

  Json objects = Json::object();
  for (const auto& o : log.objects()) {
    Json jo = Json::object();
    jo["ocel:type"] = o.type;
    Json ovmap = Json::object();
    for (const auto& [name, v] : o.initial_attributes) ovmap[name] = value_to_json(v);
    jo["ocel:ovmap"] = std::move(ovmap);
    objects[o.id] = std::move(jo);

    for (const auto& c : o.changes)
      loss.add({SpecId::S8, {}}, "objects/" + o.id + "/" + c.attribute + "@" + c.at.to_iso(),
               loss::DroppedChange{o.id, c});
    for (const auto& r : o.relations)
      loss.add({SpecId::S9, {}}, "objects/" + o.id + "/relations/" + r.qualifier + "/" + r.target,
               loss::DroppedRelation{r});
  }
  doc["ocel:objects"] = std::move(objects);

  for (const auto& [k, text] : log.meta().extensions) doc[k] = parse_json(text, "extensions/" + k);

  out.bytes = doc.dump(2) + "\n";
  return out;
}

inline DecodeResult read_ocel1(const std::string& bytes, ReadOptions opts = {}) {
  Json doc = parse_json(bytes, "ocel1");
  if (!doc.is_object() || !doc.contains("ocel:events") || !doc.contains("ocel:objects"))
    throw CodecError(CodecError::What::MalformedDocument, "/",
                     "expected ocel:events and ocel:objects");

  std::vector<CodecWarning> warnings;
  LogMeta meta;
  std::optional<Mode> doc_mode;
  std::set<std::string> time_hints;
  std::map<std::string, std::map<std::string, ValueKind>> object_kinds;
  std::map<std::string, std::map<std::string, ValueKind>> event_kinds;
  std::set<std::string> declared_object_types;

  if (const Json* global = get_if(doc, "ocel:global-log"); global && global->is_object()) {
    if (const Json* m = get_if(*global, "oclog:mode"); m && m->is_string())
      doc_mode = m->get<std::string>() == "strict" ? Mode::Strict : Mode::Lax;
    read_meta_keys(*global, "oclog:mode", "oclog:reflexive-qualifiers", meta);
    if (const Json* h = get_if(*global, "oclog:time-attributes"); h && h->is_array())
      for (const auto& n : *h)
        if (n.is_string()) time_hints.insert(n.get<std::string>());
    if (const Json* t = get_if(*global, "ocel:object-types"); t && t->is_array())
      for (const auto& n : *t)
        if (n.is_string()) declared_object_types.insert(n.get<std::string>());
    auto read_kinds = [&](const char* key, auto& into) {
      const Json* k = get_if(*global, key);
      if (!k || !k->is_object()) return;
      for (const auto& [type_name, attrs] : k->items()) {
        auto& decl = into[type_name];
        if (!attrs.is_object()) continue;
        for (const auto& [attr, kind_name] : attrs.items()) {
          if (!kind_name.is_string()) continue;
          if (auto kind = value_kind_from_string(kind_name.template get<std::string>()))
            decl[attr] = *kind;
        }
      }
    };
    read_kinds("oclog:object-attribute-kinds", object_kinds);
    read_kinds("oclog:event-attribute-kinds", event_kinds);
  }
  for (const auto& [k, v] : doc.items()) {
    if (!detail::kOcel1KnownKeys.count(k)) meta.extensions[k] = v.dump();
  }

  auto decode_value = [&](const Json& j, const std::string& where, const std::string& name) {
    return value_from_json(j, where, time_hints.count(name) > 0);
  };

  std::vector<Object> objects;
  const Json& jobjects = doc["ocel:objects"];
  if (!jobjects.is_object())
    throw CodecError(CodecError::What::MalformedDocument, "ocel:objects", "must be an object");
  for (const auto& [id, jo] : jobjects.items()) {
    Object o;
    o.id = id;
    o.type = require_string(jo, "ocel:type", "objects/" + id);
    if (const Json* ovmap = get_if(jo, "ocel:ovmap"); ovmap && ovmap->is_object()) {
      for (const auto& [name, v] : ovmap->items())
        o.initial_attributes[name] = decode_value(v, "objects/" + id + "/" + name, name);
    }
    objects.push_back(std::move(o));
  }

  std::vector<Event> events;
  const Json& jevents = doc["ocel:events"];
  if (!jevents.is_object())
    throw CodecError(CodecError::What::MalformedDocument, "ocel:events", "must be an object");
  for (const auto& [id, je] : jevents.items()) {
    Event e;
    e.id = id;
    e.activity = require_string(je, "ocel:activity", "events/" + id);
    const Json* jt = get_if(je, "ocel:timestamp");
    if (!jt)
      throw CodecError(CodecError::What::MalformedDocument, "events/" + id, "missing timestamp");
    e.timestamp = parse_timestamp_field(*jt, "events/" + id, &warnings);
    if (const Json* omap = get_if(je, "ocel:omap"); omap && omap->is_array()) {
      std::set<std::string> seen;
      for (const auto& jid : *omap) {
        if (!jid.is_string())
          throw CodecError(CodecError::What::MalformedDocument, "events/" + id + "/omap",
                           "object ids must be strings");
        const auto oid = jid.get<std::string>();
        if (!seen.insert(oid).second) {
          warnings.push_back({kWarnDuplicateE2oCollapsed, "events/" + id + "/omap",
                              "duplicate reference to '" + oid + "' collapsed"});
          continue;
        }
        e.e2o.push_back({oid, std::nullopt});
      }
    }
    if (const Json* vmap = get_if(je, "ocel:vmap"); vmap && vmap->is_object()) {
      for (const auto& [name, v] : vmap->items())
        e.attributes[name] = decode_value(v, "events/" + id + "/" + name, name);
    }
    events.push_back(std::move(e));
  }

  // Types: hinted schemas win; otherwise infer from observed values in a
  // deterministic (sorted) order.
  std::vector<ObjectType> otypes;
  {
    std::map<std::string, std::map<std::string, ValueKind>> inferred = object_kinds;
    for (const auto& name : declared_object_types) inferred[name];
    std::vector<const Object*> sorted;
    for (const auto& o : objects) sorted.push_back(&o);
    std::sort(sorted.begin(), sorted.end(),
              [](const Object* a, const Object* b) { return a->id < b->id; });
    for (const Object* o : sorted) {
      auto& decl = inferred[o->type];
      if (object_kinds.count(o->type)) continue;  // schema fully hinted
      for (const auto& [name, v] : o->initial_attributes)
        if (!v.is_null()) decl.emplace(name, v.kind());
    }
    for (auto& [name, decl] : inferred) otypes.push_back({name, std::nullopt, std::move(decl)});
  }
  std::vector<EventType> etypes;
  {
    std::map<std::string, std::map<std::string, ValueKind>> inferred = event_kinds;
    std::vector<const Event*> sorted;
    for (const auto& e : events) sorted.push_back(&e);
    std::sort(sorted.begin(), sorted.end(),
              [](const Event* a, const Event* b) { return a->id < b->id; });
    for (const Event* e : sorted) {
      auto& decl = inferred[e->activity];
      if (event_kinds.count(e->activity)) continue;
      for (const auto& [name, v] : e->attributes)
        if (!v.is_null()) decl.emplace(name, v.kind());
    }
    for (auto& [name, decl] : inferred) etypes.push_back({name, std::move(decl)});
  }

  // Event attributes shadowing a related object's schema cannot say which
  // object instance the value belongs to.
  {
    std::map<std::string, const Object*> by_id;
    for (const auto& o : objects) by_id[o.id] = &o;
    std::map<std::string, std::map<std::string, ValueKind>> schema_of;
    for (const auto& t : otypes) schema_of[t.name] = t.declared_attributes;
    for (const auto& e : events) {
      for (const auto& [name, v] : e.attributes) {
        for (const auto& link : e.e2o) {
          auto obj = by_id.find(link.object);
          if (obj == by_id.end()) continue;
          auto schema = schema_of.find(obj->second->type);
          if (schema != schema_of.end() && schema->second.count(name)) {
            warnings.push_back(
                {kWarnAmbiguousTarget, "events/" + e.id + "/vmap/" + name,
                 "attribute name collides with attribute of related object '" + link.object +
                     "'; target instance unclear"});
            break;
          }
        }
      }
    }
  }

  const Mode mode = opts.effective(doc_mode);
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

}  // namespace oclog::codec
