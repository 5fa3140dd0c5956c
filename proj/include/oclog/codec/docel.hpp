#pragma once
// DOCEL table bundle codec: a manifest plus CSV members. Events live in one
// table, each object type gets a static attribute table, and each dynamic
// attribute gets its own table whose rows carry two foreign keys (owning
// object, causing event). Bundles are a directory or a zip archive.

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "oclog/codec/common.hpp"
#include "oclog/codec/csv.hpp"
#include "oclog/codec/ocel1.hpp"
#include "oclog/codec/zipfile.hpp"
#include "oclog/loss.hpp"
#include "oclog/model.hpp"

namespace oclog::codec {

// Member name -> file content.
using TableBundle = std::map<std::string, std::string>;

inline constexpr const char* kDocelManifest = "manifest.json";
inline constexpr const char* kDocelUnknownCause = "UNKNOWN";

namespace detail {

inline std::string table_file_name(const std::string& prefix, const std::string& raw,
                                   std::set<std::string>& used) {
  std::string safe;
  for (char c : raw) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '-' || c == '_' || c == '.';
    safe += ok ? c : '_';
  }
  std::string name = prefix + safe + ".csv";
  int n = 2;
  while (!used.insert(name).second) name = prefix + safe + "_" + std::to_string(n++) + ".csv";
  return name;
}

inline Json kind_map_to_json(const std::map<std::string, ValueKind>& decl) {
  Json m = Json::object();
  for (const auto& [name, kind] : decl) m[name] = to_string(kind);
  return m;
}

inline std::map<std::string, ValueKind> kind_map_from_json(const Json& j) {
  std::map<std::string, ValueKind> decl;
  if (!j.is_object()) return decl;
  for (const auto& [name, kind_name] : j.items()) {
    if (!kind_name.is_string()) continue;
    if (auto kind = value_kind_from_string(kind_name.template get<std::string>()))
      decl[name] = *kind;
  }
  return decl;
}

}  // namespace detail

struct DocelEncodeResult {
  TableBundle tables;
  LossReport loss;
};

inline DocelEncodeResult write_docel(const OCLog& log) {
  DocelEncodeResult out;
  LossReport& loss = out.loss;
  std::set<std::string> used_names{kDocelManifest};

  Json manifest = Json::object();
  manifest["format"] = "docel";
  manifest["version"] = "1.0";
  manifest["mode"] = to_string(log.meta().mode);
  if (!log.meta().reflexive_qualifiers.empty()) {
    Json arr = Json::array();
    for (const auto& q : log.meta().reflexive_qualifiers) arr.push_back(q);
    manifest["reflexive_qualifiers"] = std::move(arr);
  }

  // Events table: attribute columns are the union over all events.
  std::set<std::string> event_attr_names;
  for (const auto& e : log.events())
    for (const auto& [name, v] : e.attributes) event_attr_names.insert(name);
  {
    std::vector<CsvRow> rows;
    CsvRow header{"event_id", "activity", "timestamp", "objects"};
    for (const auto& name : event_attr_names) header.push_back(name);
    rows.push_back(header);
    for (const auto& e : log.events()) {
      Json omap = Json::array();
      for (const auto& id : detail::unqualified_omap(e, &loss, "events.csv/" + e.id))
        omap.push_back(id);
      CsvRow row{e.id, e.activity, e.timestamp.to_iso(), omap.dump()};
      for (const auto& name : event_attr_names) {
        auto it = e.attributes.find(name);
        row.push_back(it == e.attributes.end() ? "" : value_to_json(it->second).dump());
      }
      rows.push_back(std::move(row));
    }
    out.tables["events.csv"] = csv_emit(rows);
    used_names.insert("events.csv");
    Json ev = Json::object();
    ev["file"] = "events.csv";
    Json kinds = Json::object();
    for (const auto& t : log.event_types()) kinds[t.name] = detail::kind_map_to_json(t.declared_attributes);
    ev["attribute_kinds"] = std::move(kinds);
    manifest["events"] = std::move(ev);
  }

  // Static object tables, one per type; columns are declared plus observed
  // (instances may carry inherited attributes their own type omits).
  {
    Json objects_section = Json::object();
    for (const auto& t : log.object_types()) {
      if (t.parent)
        loss.add({SpecId::S12, {}}, "manifest/objects/" + t.name,
                 loss::DroppedParent{t.name, *t.parent});
      std::set<std::string> columns;
      for (const auto& [name, kind] : t.declared_attributes) columns.insert(name);
      for (const auto& o : log.objects())
        if (o.type == t.name)
          for (const auto& [name, v] : o.initial_attributes) columns.insert(name);

      std::vector<CsvRow> rows;
      CsvRow header{"object_id"};
      for (const auto& c : columns) header.push_back(c);
      rows.push_back(header);
      for (const auto& o : log.objects()) {
        if (o.type != t.name) continue;
        CsvRow row{o.id};
        for (const auto& c : columns) {
          auto it = o.initial_attributes.find(c);
          row.push_back(it == o.initial_attributes.end() ? "" : value_to_json(it->second).dump());
        }
        rows.push_back(std::move(row));
      }
      const std::string file = detail::table_file_name("objects_", t.name, used_names);
      out.tables[file] = csv_emit(rows);
      Json entry = Json::object();
      entry["file"] = file;
      entry["attribute_kinds"] = detail::kind_map_to_json(t.declared_attributes);
      objects_section[t.name] = std::move(entry);
    }
    manifest["objects"] = std::move(objects_section);
  }

  // Dynamic attribute tables; a change without a cause event cannot be
  // expressed (the row's timestamp lives on the event), so it is dropped
  // with a sentinel row left in place of the missing foreign key.
  {
    struct DynRow {
      std::string object;
      Timestamp at;
      std::string cause;
      std::string value_json;
    };
    std::map<std::string, std::vector<DynRow>> tables;
    std::map<std::string, ValueKind> dyn_kinds;
    for (const auto& o : log.objects()) {
      for (const auto& c : o.changes) {
        std::string cause = kDocelUnknownCause;
        if (c.cause) {
          cause = *c.cause;
        } else {
          loss.add({SpecId::S8, "uncaused"},
                   "objects/" + o.id + "/" + c.attribute + "@" + c.at.to_iso(),
                   loss::DroppedChange{o.id, c});
        }
        tables[c.attribute].push_back({o.id, c.at, cause, value_to_json(c.value).dump()});
        if (!dyn_kinds.count(c.attribute) && !c.value.is_null())
          dyn_kinds[c.attribute] = c.value.kind();
      }
    }
    Json dynamic_section = Json::object();
    for (auto& [attr, rows] : tables) {
      std::sort(rows.begin(), rows.end(), [](const DynRow& a, const DynRow& b) {
        return std::tie(a.object, a.at, a.cause) < std::tie(b.object, b.at, b.cause);
      });
      std::vector<CsvRow> csv;
      csv.push_back({"change_id", "value", "event_id", "object_id"});
      int n = 1;
      for (const auto& r : rows)
        csv.push_back({"va" + std::to_string(n++), r.value_json, r.cause, r.object});
      const std::string file = detail::table_file_name("dynamic_", attr, used_names);
      out.tables[file] = csv_emit(csv);
      Json entry = Json::object();
      entry["file"] = file;
      entry["kind"] = to_string(dyn_kinds.count(attr) ? dyn_kinds[attr] : ValueKind::Null);
      dynamic_section[attr] = std::move(entry);
    }
    manifest["dynamic"] = std::move(dynamic_section);
  }

  for (const auto& o : log.objects())
    for (const auto& r : o.relations)
      loss.add({SpecId::S9, {}}, "objects/" + o.id + "/relations/" + r.qualifier + "/" + r.target,
               loss::DroppedRelation{r});

  if (auto hints = collect_time_attributes(log); !hints.empty()) {
    Json arr = Json::array();
    for (const auto& n : hints) arr.push_back(n);
    manifest["time_attributes"] = std::move(arr);
  }
  if (!log.meta().extensions.empty()) {
    Json ext = Json::object();
    for (const auto& [k, text] : log.meta().extensions) ext[k] = parse_json(text, "meta/" + k);
    manifest["extensions"] = std::move(ext);
  }

  out.tables[kDocelManifest] = manifest.dump(2) + "\n";
  return out;
}

inline DecodeResult read_docel(const TableBundle& tables, ReadOptions opts = {}) {
  auto manifest_it = tables.find(kDocelManifest);
  if (manifest_it == tables.end())
    throw CodecError(CodecError::What::MalformedTable, kDocelManifest, "missing manifest");
  Json manifest = parse_json(manifest_it->second, kDocelManifest);
  if (!manifest.is_object() || !manifest.contains("format") ||
      manifest["format"] != Json("docel"))
    throw CodecError(CodecError::What::MalformedTable, kDocelManifest, "not a docel manifest");

  std::vector<CodecWarning> warnings;
  LogMeta meta;
  std::optional<Mode> doc_mode;
  if (const Json* m = get_if(manifest, "mode"); m && m->is_string())
    doc_mode = m->get<std::string>() == "strict" ? Mode::Strict : Mode::Lax;
  if (const Json* r = get_if(manifest, "reflexive_qualifiers"); r && r->is_array())
    for (const auto& q : *r)
      if (q.is_string()) meta.reflexive_qualifiers.insert(q.get<std::string>());
  std::set<std::string> time_hints;
  if (const Json* h = get_if(manifest, "time_attributes"); h && h->is_array())
    for (const auto& n : *h)
      if (n.is_string()) time_hints.insert(n.get<std::string>());
  if (const Json* e = get_if(manifest, "extensions"); e && e->is_object())
    for (const auto& [k, v] : e->items()) meta.extensions[k] = v.dump();

  auto member = [&](const std::string& file) -> const std::string& {
    auto it = tables.find(file);
    if (it == tables.end())
      throw CodecError(CodecError::What::MalformedTable, file, "member listed in manifest is missing");
    return it->second;
  };
  auto cell_value = [&](const std::string& cell, const std::string& where, bool expect_time) {
    Json j = Json::parse(cell, nullptr, false);
    if (j.is_discarded())
      throw CodecError(CodecError::What::MalformedTable, where, "cell is not valid JSON");
    return value_from_json(j, where, expect_time);
  };

  // Event types and the events table.
  std::vector<EventType> etypes;
  std::map<std::string, std::map<std::string, ValueKind>> event_kinds;
  std::vector<Event> events;
  {
    const Json* ev = get_if(manifest, "events");
    if (!ev || !ev->is_object())
      throw CodecError(CodecError::What::MalformedTable, kDocelManifest, "missing events section");
    if (const Json* kinds = get_if(*ev, "attribute_kinds"); kinds && kinds->is_object())
      for (const auto& [etype, m] : kinds->items())
        event_kinds[etype] = detail::kind_map_from_json(m);
    const std::string file = require_string(*ev, "file", kDocelManifest);
    auto rows = csv_parse(member(file), file);
    if (rows.empty() || rows[0].size() < 4 || rows[0][0] != "event_id")
      throw CodecError(CodecError::What::MalformedTable, file, "bad header");
    const CsvRow& header = rows[0];
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const auto& row = rows[i];
      const std::string where = file + ":" + std::to_string(i + 1);
      if (row.size() != header.size())
        throw CodecError(CodecError::What::MalformedTable, where, "column count mismatch");
      Event e;
      e.id = row[0];
      e.activity = row[1];
      auto t = Timestamp::parse(row[2]);
      if (!t) throw CodecError(CodecError::What::MalformedTable, where, "bad timestamp");
      if (row[2].find('Z') == std::string::npos && row[2].find('z') == std::string::npos)
        warnings.push_back({kWarnTzNormalized, where, "offset normalized to UTC"});
      e.timestamp = *t;
      Json omap = Json::parse(row[3], nullptr, false);
      if (omap.is_discarded() || !omap.is_array())
        throw CodecError(CodecError::What::MalformedTable, where, "objects cell must be a JSON array");
      for (const auto& jid : omap) {
        if (!jid.is_string())
          throw CodecError(CodecError::What::MalformedTable, where, "object ids must be strings");
        e.e2o.push_back({jid.get<std::string>(), std::nullopt});
      }
      for (std::size_t c = 4; c < row.size(); ++c) {
        if (row[c].empty()) continue;
        const std::string& attr = header[c];
        auto ek = event_kinds.find(e.activity);
        bool expect_time = time_hints.count(attr) > 0;
        if (ek != event_kinds.end()) {
          auto it = ek->second.find(attr);
          if (it != ek->second.end() && it->second == ValueKind::Time) expect_time = true;
        }
        e.attributes[attr] = cell_value(row[c], where + "/" + attr, expect_time);
      }
      events.push_back(std::move(e));
    }
    for (const auto& [name, decl] : event_kinds) etypes.push_back({name, decl});
  }
  std::set<std::string> event_ids;
  for (const auto& e : events) event_ids.insert(e.id);

  // Object types and their static tables.
  std::vector<ObjectType> otypes;
  std::vector<Object> objects;
  {
    const Json* section = get_if(manifest, "objects");
    if (!section || !section->is_object())
      throw CodecError(CodecError::What::MalformedTable, kDocelManifest, "missing objects section");
    for (const auto& [type_name, entry] : section->items()) {
      ObjectType t;
      t.name = type_name;
      if (const Json* kinds = get_if(entry, "attribute_kinds"))
        t.declared_attributes = detail::kind_map_from_json(*kinds);
      const std::string file = require_string(entry, "file", kDocelManifest);
      auto rows = csv_parse(member(file), file);
      if (rows.empty() || rows[0].empty() || rows[0][0] != "object_id")
        throw CodecError(CodecError::What::MalformedTable, file, "bad header");
      const CsvRow& header = rows[0];
      for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        const std::string where = file + ":" + std::to_string(i + 1);
        if (row.size() != header.size())
          throw CodecError(CodecError::What::MalformedTable, where, "column count mismatch");
        Object o;
        o.id = row[0];
        o.type = type_name;
        for (std::size_t c = 1; c < row.size(); ++c) {
          if (row[c].empty()) continue;
          const std::string& attr = header[c];
          bool expect_time = time_hints.count(attr) > 0;
          auto it = t.declared_attributes.find(attr);
          if (it != t.declared_attributes.end() && it->second == ValueKind::Time) expect_time = true;
          o.initial_attributes[attr] = cell_value(row[c], where + "/" + attr, expect_time);
        }
        objects.push_back(std::move(o));
      }
      otypes.push_back(std::move(t));
    }
  }
  std::map<std::string, Object*> object_by_id;
  for (auto& o : objects) object_by_id[o.id] = &o;

  // Events' object references are foreign keys into the object tables.
  for (const auto& e : events)
    for (const auto& link : e.e2o)
      if (!object_by_id.count(link.object))
        throw CodecError(CodecError::What::ForeignKeyViolation, "events.csv/" + e.id,
                         "references missing object '" + link.object + "'");

  std::map<std::string, Timestamp> event_time;
  for (const auto& e : events) event_time[e.id] = e.timestamp;

  // Dynamic attribute tables.
  if (const Json* section = get_if(manifest, "dynamic"); section && section->is_object()) {
    for (const auto& [attr, entry] : section->items()) {
      const std::string file = require_string(entry, "file", kDocelManifest);
      bool expect_time = time_hints.count(attr) > 0;
      if (const Json* k = get_if(entry, "kind"); k && k->is_string())
        if (auto kind = value_kind_from_string(k->get<std::string>()); kind && *kind == ValueKind::Time)
          expect_time = true;
      auto rows = csv_parse(member(file), file);
      if (rows.empty() || rows[0] != CsvRow{"change_id", "value", "event_id", "object_id"})
        throw CodecError(CodecError::What::MalformedTable, file, "bad header");
      for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        const std::string where = file + ":" + std::to_string(i + 1);
        if (row.size() != 4)
          throw CodecError(CodecError::What::MalformedTable, where, "expected 4 columns");
        const std::string& cause = row[2];
        const std::string& object_id = row[3];
        if (cause == kDocelUnknownCause) {
          warnings.push_back({kWarnUncausedChangeSkipped, where,
                              "row has no causing event; the change cannot be dated and is skipped"});
          continue;
        }
        if (!event_ids.count(cause))
          throw CodecError(CodecError::What::ForeignKeyViolation, where,
                           "references missing event '" + cause + "'");
        auto obj = object_by_id.find(object_id);
        if (obj == object_by_id.end())
          throw CodecError(CodecError::What::ForeignKeyViolation, where,
                           "references missing object '" + object_id + "'");
        AttributeChange c;
        c.attribute = attr;
        c.value = cell_value(row[1], where, expect_time);
        c.at = event_time.at(cause);
        c.cause = cause;
        obj->second->changes.push_back(std::move(c));
      }
    }
  }

  const Mode mode = opts.effective(doc_mode);
  meta.mode = mode;
  auto built = build_log(std::move(otypes), std::move(etypes), std::move(objects),
                         std::move(events), mode, std::move(meta));
  if (!built.ok())
    throw CodecError(CodecError::What::MalformedTable, "/", built.error_summary());
  return {std::move(*built.log), std::move(warnings)};
}

// --------------------------------------------------------------------------
// Byte and filesystem forms. The byte form of a bundle is a zip archive.
// --------------------------------------------------------------------------

inline EncodeResult write_docel_bytes(const OCLog& log) {
  auto enc = write_docel(log);
  return {zip_write(enc.tables), std::move(enc.loss)};
}

inline DecodeResult read_docel_bytes(const std::string& bytes, ReadOptions opts = {}) {
  if (looks_like_zip(bytes)) return read_docel(zip_read(bytes), opts);
  // A raw manifest (bundle-as-directory read through its manifest alone)
  // is not decodable without its members.
  throw CodecError(CodecError::What::MalformedTable, "docel", "expected a zip bundle");
}

inline void save_docel(const OCLog& log, const std::filesystem::path& path, LossReport* loss) {
  auto enc = write_docel(log);
  if (loss) *loss = enc.loss;
  if (path.extension() == ".zip") {
    std::ofstream out(path, std::ios::binary);
    out << zip_write(enc.tables);
    return;
  }
  std::filesystem::create_directories(path);
  for (const auto& [name, data] : enc.tables) {
    std::ofstream out(path / name, std::ios::binary);
    out << data;
  }
}

inline TableBundle load_docel_bundle(const std::filesystem::path& path) {
  TableBundle tables;
  if (std::filesystem::is_directory(path)) {
    for (const auto& entry : std::filesystem::directory_iterator(path)) {
      if (!entry.is_regular_file()) continue;
      std::ifstream in(entry.path(), std::ios::binary);
      tables[entry.path().filename().string()] =
          std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }
    return tables;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw CodecError(CodecError::What::MalformedTable, path.string(), "cannot open bundle");
  const std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return zip_read(bytes);
}

}  // namespace oclog::codec
