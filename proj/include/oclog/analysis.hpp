#pragma once
// Object-centric analyses: per-object trace recovery, flattening onto a
// single case notion with convergence/divergence accounting, and log
// statistics (including serialized sizes per codec).

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "oclog/codec/csv.hpp"
#include "oclog/formats.hpp"
#include "oclog/model.hpp"

namespace oclog {

struct TraceStep {
  std::string event;
  std::string activity;
  Timestamp timestamp;
  std::optional<std::string> qualifier;

  bool operator==(const TraceStep&) const = default;
};

struct Trace {
  std::string object;
  std::vector<TraceStep> steps;  // nondecreasing in (timestamp, event id)

  bool operator==(const Trace&) const = default;
};

// All events whose E2O links include the object, in canonical order. An
// event linked through several qualifiers contributes one step carrying
// the lexicographically smallest qualifier.
inline Trace trace_of(const OCLog& log, const std::string& object) {
  if (log.find_object(object) == nullptr)
    throw LookupError(LookupError::What::UnknownObject, object);
  Trace trace{object, {}};
  for (const auto& e : log.events()) {
    std::optional<std::string> qualifier;
    bool related = false;
    for (const auto& link : e.e2o) {
      if (link.object != object) continue;
      related = true;
      if (link.qualifier && (!qualifier || *link.qualifier < *qualifier))
        qualifier = link.qualifier;
    }
    if (related) trace.steps.push_back({e.id, e.activity, e.timestamp, qualifier});
  }
  return trace;
}

struct FlattenResult {
  std::string case_type;
  // Case id (an object of the chosen type) -> its events in canonical order.
  std::map<std::string, std::vector<std::string>> cases;
  // Sum over events of the copies beyond the first (an event in k cases
  // contributes k - 1).
  std::size_t convergence_count = 0;
  // Number of (case, foreign type) pairs whose case events span more than
  // one instance of that foreign type.
  std::size_t divergence_count = 0;
  // Events related to no instance of the case type.
  std::vector<std::string> orphan_events;
};

inline FlattenResult flatten(const OCLog& log, const std::string& case_type) {
  if (log.find_object_type(case_type) == nullptr)
    throw LookupError(LookupError::What::UnknownType, case_type);

  FlattenResult out;
  out.case_type = case_type;
  for (const auto& o : log.objects())
    if (o.type == case_type) out.cases[o.id];

  for (const auto& e : log.events()) {
    std::set<std::string> case_ids;
    for (const auto& link : e.e2o) {
      const Object* obj = log.find_object(link.object);
      if (obj && obj->type == case_type) case_ids.insert(link.object);
    }
    if (case_ids.empty()) {
      out.orphan_events.push_back(e.id);
      continue;
    }
    for (const auto& id : case_ids) out.cases[id].push_back(e.id);
    out.convergence_count += case_ids.size() - 1;
  }

  // Divergence: per case, which foreign types fan out over >1 instance.
  for (const auto& [case_id, event_ids] : out.cases) {
    std::map<std::string, std::set<std::string>> foreign;  // type -> instances
    for (const auto& eid : event_ids) {
      const Event* e = log.find_event(eid);
      for (const auto& link : e->e2o) {
        const Object* obj = log.find_object(link.object);
        if (obj && obj->type != case_type) foreign[obj->type].insert(obj->id);
      }
    }
    for (const auto& [type, instances] : foreign)
      if (instances.size() > 1) out.divergence_count += 1;
  }
  return out;
}

// Case-centric CSV for downstream single-case tooling.
inline std::string flatten_to_csv(const OCLog& log, const FlattenResult& flat) {
  std::vector<codec::CsvRow> rows;
  rows.push_back({"case_id", "activity", "timestamp", "event_id"});
  for (const auto& [case_id, event_ids] : flat.cases) {
    for (const auto& eid : event_ids) {
      const Event* e = log.find_event(eid);
      rows.push_back({case_id, e->activity, e->timestamp.to_iso(), e->id});
    }
  }
  return codec::csv_emit(rows);
}

struct LogStats {
  std::size_t events = 0;
  std::size_t objects = 0;
  std::map<std::string, std::size_t> objects_per_type;
  std::map<std::string, std::size_t> events_per_activity;
  std::map<std::string, std::size_t> relations_per_qualifier;
  std::map<std::string, std::size_t> changes_per_attribute;
  std::map<std::string, std::size_t> serialized_bytes;  // codec short name -> bytes
};

inline LogStats log_stats(const OCLog& log) {
  LogStats s;
  s.events = log.events().size();
  s.objects = log.objects().size();
  for (const auto& t : log.object_types()) s.objects_per_type[t.name] = 0;
  for (const auto& o : log.objects()) {
    s.objects_per_type[o.type] += 1;
    for (const auto& r : o.relations) s.relations_per_qualifier[r.qualifier] += 1;
    for (const auto& c : o.changes) s.changes_per_attribute[c.attribute] += 1;
  }
  for (const auto& e : log.events()) s.events_per_activity[e.activity] += 1;
  for (codec::FormatId f : codec::kAllFormats)
    s.serialized_bytes[codec::short_name(f)] = codec::write_bytes(f, log).bytes.size();
  return s;
}

inline codec::Json stats_to_json(const LogStats& s) {
  codec::Json j = codec::Json::object();
  j["schema_version"] = 1;
  j["events"] = s.events;
  j["objects"] = s.objects;
  auto put_map = [&](const char* key, const std::map<std::string, std::size_t>& m) {
    codec::Json o = codec::Json::object();
    for (const auto& [k, v] : m) o[k] = v;
    j[key] = std::move(o);
  };
  put_map("objects_per_type", s.objects_per_type);
  put_map("events_per_activity", s.events_per_activity);
  put_map("relations_per_qualifier", s.relations_per_qualifier);
  put_map("changes_per_attribute", s.changes_per_attribute);
  put_map("serialized_bytes", s.serialized_bytes);
  return j;
}

}  // namespace oclog
