#pragma once
// Canonical object-centric log model: a superset able to hold everything
// any supported on-disk format can express. Logs are immutable once built;
// build_log is the single gate that establishes referential integrity.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "oclog/errors.hpp"
#include "oclog/time.hpp"
#include "oclog/value.hpp"

namespace oclog {

enum class Mode { Strict, Lax };

inline const char* to_string(Mode m) { return m == Mode::Strict ? "strict" : "lax"; }

struct ObjectType {
  std::string name;
  std::optional<std::string> parent;
  std::map<std::string, ValueKind> declared_attributes;

  bool operator==(const ObjectType&) const = default;
};

struct EventType {
  std::string name;
  std::map<std::string, ValueKind> declared_attributes;

  bool operator==(const EventType&) const = default;
};

struct E2ORelation {
  std::string object;
  std::optional<std::string> qualifier;

  bool operator==(const E2ORelation&) const = default;
  auto operator<=>(const E2ORelation&) const = default;
};

struct Event {
  std::string id;
  std::string activity;
  Timestamp timestamp;
  std::map<std::string, AttributeValue> attributes;
  std::vector<E2ORelation> e2o;

  bool operator==(const Event&) const = default;

  bool relates_to(const std::string& object_id) const {
    for (const auto& link : e2o)
      if (link.object == object_id) return true;
    return false;
  }
};

struct AttributeChange {
  std::string attribute;
  AttributeValue value;
  Timestamp at;
  std::optional<std::string> cause;

  bool operator==(const AttributeChange&) const = default;
};

// A directed, qualified relation between two objects. Validity is the
// half-open interval [valid_from, valid_to); an absent bound extends to
// the corresponding infinity. change_cause names the event that created
// the relation (its onset), when known.
struct O2ORelation {
  std::string source;
  std::string target;
  std::string qualifier;
  std::optional<Timestamp> valid_from;
  std::optional<Timestamp> valid_to;
  std::optional<std::string> change_cause;

  bool operator==(const O2ORelation&) const = default;

  bool active_at(Timestamp at) const {
    if (valid_from && at < *valid_from) return false;
    if (valid_to && !(at < *valid_to)) return false;
    return true;
  }
};

struct Object {
  std::string id;
  std::string type;
  std::map<std::string, AttributeValue> initial_attributes;
  std::vector<AttributeChange> changes;
  std::vector<O2ORelation> relations;

  bool operator==(const Object&) const = default;
};

struct LogMeta {
  Mode mode = Mode::Lax;
  // Qualifiers for which source == target relations are legal.
  std::set<std::string> reflexive_qualifiers;
  // Unknown top-level document keys, preserved verbatim as JSON text.
  std::map<std::string, std::string> extensions;

  bool operator==(const LogMeta&) const = default;
};

class OCLog {
 public:
  OCLog() = default;

  const std::vector<ObjectType>& object_types() const { return object_types_; }
  const std::vector<EventType>& event_types() const { return event_types_; }
  const std::vector<Object>& objects() const { return objects_; }
  // Events in nondecreasing timestamp order, ties broken by event id.
  const std::vector<Event>& events() const { return events_; }
  const LogMeta& meta() const { return meta_; }

  const Object* find_object(const std::string& id) const {
    auto it = object_index_.find(id);
    return it == object_index_.end() ? nullptr : &objects_[it->second];
  }
  const Event* find_event(const std::string& id) const {
    auto it = event_index_.find(id);
    return it == event_index_.end() ? nullptr : &events_[it->second];
  }
  const ObjectType* find_object_type(const std::string& name) const {
    auto it = object_type_index_.find(name);
    return it == object_type_index_.end() ? nullptr : &object_types_[it->second];
  }
  const EventType* find_event_type(const std::string& name) const {
    auto it = event_type_index_.find(name);
    return it == event_type_index_.end() ? nullptr : &event_types_[it->second];
  }

  // Position of an event in the canonical (timestamp, id) order.
  std::size_t event_order(const std::string& id) const {
    auto it = event_index_.find(id);
    return it == event_index_.end() ? events_.size() : it->second;
  }

  bool operator==(const OCLog& other) const {
    return object_types_ == other.object_types_ && event_types_ == other.event_types_ &&
           objects_ == other.objects_ && events_ == other.events_ && meta_ == other.meta_;
  }

 private:
  std::vector<ObjectType> object_types_;  // sorted by name
  std::vector<EventType> event_types_;    // sorted by name
  std::vector<Object> objects_;           // sorted by id
  std::vector<Event> events_;             // sorted by (timestamp, id)
  LogMeta meta_;
  std::map<std::string, std::size_t> object_index_;
  std::map<std::string, std::size_t> event_index_;
  std::map<std::string, std::size_t> object_type_index_;
  std::map<std::string, std::size_t> event_type_index_;

  friend class LogBuilder;
};

struct BuildResult {
  std::optional<OCLog> log;
  std::vector<BuildError> errors;

  bool ok() const { return log.has_value(); }

  const OCLog& value() const { return *log; }

  std::string error_summary() const {
    std::string s;
    for (const auto& e : errors) {
      if (!s.empty()) s += "; ";
      s += e.to_string();
    }
    return s;
  }
};

// Computes the inherited attribute schema for a type within a set of
// declarations. Standalone so build_log can use it before a log exists.
inline std::map<std::string, ValueKind> effective_schema_of(
    const std::vector<ObjectType>& types, const std::string& name) {
  std::map<std::string, ValueKind> out;
  const ObjectType* cur = nullptr;
  auto find = [&](const std::string& n) -> const ObjectType* {
    for (const auto& t : types)
      if (t.name == n) return &t;
    return nullptr;
  };
  cur = find(name);
  int guard = 0;
  while (cur != nullptr && guard++ < 1 << 16) {
    for (const auto& [attr, kind] : cur->declared_attributes) out.emplace(attr, kind);
    cur = cur->parent ? find(*cur->parent) : nullptr;
  }
  return out;
}

class LogBuilder {
 public:
  LogBuilder& object_type(ObjectType t) {
    object_types_.push_back(std::move(t));
    return *this;
  }
  LogBuilder& event_type(EventType t) {
    event_types_.push_back(std::move(t));
    return *this;
  }
  LogBuilder& object(Object o) {
    objects_.push_back(std::move(o));
    return *this;
  }
  LogBuilder& event(Event e) {
    events_.push_back(std::move(e));
    return *this;
  }
  LogBuilder& meta(LogMeta m) {
    meta_ = std::move(m);
    return *this;
  }

  BuildResult build(Mode mode) &&;

 private:
  std::vector<ObjectType> object_types_;
  std::vector<EventType> event_types_;
  std::vector<Object> objects_;
  std::vector<Event> events_;
  LogMeta meta_;
};

inline BuildResult build_log(std::vector<ObjectType> object_types,
                             std::vector<EventType> event_types, std::vector<Object> objects,
                             std::vector<Event> events, Mode mode = Mode::Lax,
                             LogMeta meta = {}) {
  LogBuilder b;
  for (auto& t : object_types) b.object_type(std::move(t));
  for (auto& t : event_types) b.event_type(std::move(t));
  for (auto& o : objects) b.object(std::move(o));
  for (auto& e : events) b.event(std::move(e));
  b.meta(std::move(meta));
  return std::move(b).build(mode);
}

inline BuildResult LogBuilder::build(Mode mode) && {
  std::vector<BuildError> errors;
  auto dup = [&](const char* kind, const std::string& id) {
    errors.push_back({BuildError::Code::DuplicateId, kind, id, {}, {}});
  };
  auto dangling = [&](const std::string& from, const std::string& to) {
    errors.push_back({BuildError::Code::DanglingReference, {}, from, to, {}});
  };
  auto mismatch = [&](const std::string& subject, const std::string& detail) {
    errors.push_back({BuildError::Code::SchemaMismatch, {}, subject, detail, {}});
  };

  meta_.mode = mode;

  // Empty and absent E2O qualifiers are one canonical form.
  for (auto& e : events_)
    for (auto& link : e.e2o)
      if (link.qualifier && link.qualifier->empty()) link.qualifier.reset();

  // Type tables.
  std::map<std::string, const ObjectType*> otypes;
  for (const auto& t : object_types_) {
    if (t.name.empty()) mismatch("object type", "empty name");
    if (!otypes.emplace(t.name, &t).second) dup("object_type", t.name);
  }
  std::map<std::string, const EventType*> etypes;
  for (const auto& t : event_types_) {
    if (t.name.empty()) mismatch("event type", "empty name");
    if (!etypes.emplace(t.name, &t).second) dup("event_type", t.name);
  }

  // Parent links: existence, then acyclicity.
  for (const auto& t : object_types_) {
    if (t.parent && !otypes.count(*t.parent))
      dangling("object type '" + t.name + "'", "parent type '" + *t.parent + "'");
  }
  for (const auto& t : object_types_) {
    std::vector<std::string> path{t.name};
    std::set<std::string> seen{t.name};
    const ObjectType* cur = &t;
    bool cycled = false;
    while (cur->parent) {
      auto it = otypes.find(*cur->parent);
      if (it == otypes.end()) break;
      path.push_back(it->first);
      if (!seen.insert(it->first).second) {
        cycled = true;
        break;
      }
      cur = it->second;
    }
    // Report each cycle once, from its lexicographically least member.
    if (cycled && path.back() == t.name &&
        t.name == *std::min_element(path.begin(), path.end() - 1)) {
      errors.push_back({BuildError::Code::TypeCycle, {}, {}, {}, path});
    }
  }

  // Inherited attribute redeclaration with a conflicting kind.
  for (const auto& t : object_types_) {
    const ObjectType* cur = t.parent && otypes.count(*t.parent) ? otypes.at(*t.parent) : nullptr;
    std::set<std::string> walked{t.name};
    while (cur != nullptr) {
      for (const auto& [attr, kind] : cur->declared_attributes) {
        auto it = t.declared_attributes.find(attr);
        if (it != t.declared_attributes.end() && it->second != kind)
          mismatch("object type '" + t.name + "'",
                   "attribute '" + attr + "' redeclared with kind " + to_string(it->second) +
                       " but inherited as " + to_string(kind));
      }
      if (!cur->parent || !otypes.count(*cur->parent) || !walked.insert(cur->name).second) break;
      cur = otypes.at(*cur->parent);
    }
  }

  // Id uniqueness within each namespace (events and objects are separate
  // tables; textual collisions across the two are legal).
  std::map<std::string, const Object*> objs;
  for (const auto& o : objects_) {
    if (o.id.empty()) mismatch("object", "empty id");
    if (!objs.emplace(o.id, &o).second) dup("object", o.id);
  }
  std::map<std::string, const Event*> evts;
  for (const auto& e : events_) {
    if (e.id.empty()) mismatch("event", "empty id");
    if (!evts.emplace(e.id, &e).second) dup("event", e.id);
  }

  for (const auto& o : objects_) {
    if (!otypes.count(o.type)) dangling("object '" + o.id + "'", "object type '" + o.type + "'");
  }
  for (const auto& e : events_) {
    if (!etypes.count(e.activity))
      dangling("event '" + e.id + "'", "event type '" + e.activity + "'");
    std::set<std::pair<std::string, std::optional<std::string>>> links;
    for (const auto& link : e.e2o) {
      if (!objs.count(link.object)) dangling("event '" + e.id + "'", "object '" + link.object + "'");
      if (!links.insert({link.object, link.qualifier}).second)
        dup("e2o link", e.id + "->" + link.object + (link.qualifier ? "[" + *link.qualifier + "]" : ""));
    }
  }

  for (const auto& o : objects_) {
    std::set<std::tuple<std::string, Timestamp, std::optional<std::string>>> chg_keys;
    for (const auto& c : o.changes) {
      if (c.value.depth() > AttributeValue::kMaxDepth)
        mismatch("object '" + o.id + "'", "attribute '" + c.attribute + "' exceeds nesting depth");
      if (c.cause) {
        auto it = evts.find(*c.cause);
        if (it == evts.end()) {
          dangling("change on object '" + o.id + "'", "event '" + *c.cause + "'");
        } else if (it->second->timestamp != c.at) {
          mismatch("object '" + o.id + "'",
                   "change of '" + c.attribute + "' cites cause event '" + *c.cause +
                       "' whose timestamp differs from the change instant");
        }
      }
      if (!chg_keys.insert({c.attribute, c.at, c.cause}).second)
        dup("attribute change", o.id + "/" + c.attribute + "@" + c.at.to_iso());
    }
    for (const auto& [name, v] : o.initial_attributes) {
      if (v.depth() > AttributeValue::kMaxDepth)
        mismatch("object '" + o.id + "'", "attribute '" + name + "' exceeds nesting depth");
    }
    for (const auto& r : o.relations) {
      if (!r.source.empty() && r.source != o.id)
        mismatch("object '" + o.id + "'", "relation source '" + r.source + "' is not the owner");
      if (!objs.count(r.target)) dangling("object '" + o.id + "'", "object '" + r.target + "'");
      if (r.target == o.id && !meta_.reflexive_qualifiers.count(r.qualifier))
        mismatch("object '" + o.id + "'",
                 "reflexive relation '" + r.qualifier + "' not marked reflexive-allowed");
      if (r.valid_from && r.valid_to && *r.valid_to < *r.valid_from)
        mismatch("object '" + o.id + "'", "relation '" + r.qualifier + "' has valid_from after valid_to");
      if (r.change_cause && !evts.count(*r.change_cause))
        dangling("relation on object '" + o.id + "'", "event '" + *r.change_cause + "'");
    }
  }
  for (const auto& e : events_) {
    for (const auto& [name, v] : e.attributes) {
      if (v.depth() > AttributeValue::kMaxDepth)
        mismatch("event '" + e.id + "'", "attribute '" + name + "' exceeds nesting depth");
    }
  }

  if (mode == Mode::Strict && errors.empty()) {
    // Schema conformance: every object attribute must be declared, with a
    // matching kind (null is an allowed value of any kind).
    for (const auto& o : objects_) {
      if (!otypes.count(o.type)) continue;
      auto schema = effective_schema_of(object_types_, o.type);
      auto check = [&](const std::string& attr, const AttributeValue& v) {
        auto it = schema.find(attr);
        if (it == schema.end()) {
          mismatch("object '" + o.id + "'", "attribute '" + attr + "' not in schema of type '" + o.type + "'");
        } else if (!v.is_null() && v.kind() != it->second) {
          mismatch("object '" + o.id + "'",
                   "attribute '" + attr + "' has kind " + to_string(v.kind()) + ", declared " +
                       to_string(it->second));
        }
      };
      for (const auto& [name, v] : o.initial_attributes) check(name, v);
      for (const auto& c : o.changes) check(c.attribute, c.value);
    }
    // E2O cardinality: S13 (event needs >= 1 object), S14 (object needs
    // >= 1 event). Lax mode leaves these to the validator.
    std::set<std::string> touched;
    for (const auto& e : events_) {
      if (e.e2o.empty()) mismatch("event '" + e.id + "'", "not related to any object (S13)");
      for (const auto& link : e.e2o) touched.insert(link.object);
    }
    for (const auto& o : objects_) {
      if (!touched.count(o.id)) mismatch("object '" + o.id + "'", "not related to any event (S14)");
    }
  }

  if (!errors.empty()) return {std::nullopt, std::move(errors)};

  OCLog log;
  log.object_types_ = std::move(object_types_);
  log.event_types_ = std::move(event_types_);
  log.objects_ = std::move(objects_);
  log.events_ = std::move(events_);
  log.meta_ = std::move(meta_);

  std::sort(log.object_types_.begin(), log.object_types_.end(),
            [](const auto& a, const auto& b) { return a.name < b.name; });
  std::sort(log.event_types_.begin(), log.event_types_.end(),
            [](const auto& a, const auto& b) { return a.name < b.name; });
  std::sort(log.objects_.begin(), log.objects_.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  std::sort(log.events_.begin(), log.events_.end(), [](const auto& a, const auto& b) {
    return std::tie(a.timestamp, a.id) < std::tie(b.timestamp, b.id);
  });

  // Canonical inner orders make structural equality order-insensitive.
  for (auto& o : log.objects_) {
    for (auto& r : o.relations)
      if (r.source.empty()) r.source = o.id;
    std::sort(o.changes.begin(), o.changes.end(), [](const auto& a, const auto& b) {
      return std::tie(a.at, a.attribute, a.cause) < std::tie(b.at, b.attribute, b.cause);
    });
    std::sort(o.relations.begin(), o.relations.end(), [](const auto& a, const auto& b) {
      return std::tie(a.qualifier, a.target, a.valid_from, a.valid_to, a.change_cause) <
             std::tie(b.qualifier, b.target, b.valid_from, b.valid_to, b.change_cause);
    });
  }
  for (auto& e : log.events_) std::sort(e.e2o.begin(), e.e2o.end());

  for (std::size_t i = 0; i < log.objects_.size(); ++i) log.object_index_[log.objects_[i].id] = i;
  for (std::size_t i = 0; i < log.events_.size(); ++i) log.event_index_[log.events_[i].id] = i;
  for (std::size_t i = 0; i < log.object_types_.size(); ++i)
    log.object_type_index_[log.object_types_[i].name] = i;
  for (std::size_t i = 0; i < log.event_types_.size(); ++i)
    log.event_type_index_[log.event_types_[i].name] = i;

  return {std::move(log), {}};
}

// ---------------------------------------------------------------------------
// Core queries
// ---------------------------------------------------------------------------

inline std::map<std::string, ValueKind> effective_schema(const OCLog& log,
                                                         const std::string& type) {
  if (log.find_object_type(type) == nullptr)
    throw LookupError(LookupError::What::UnknownType, type);
  return effective_schema_of(log.object_types(), type);
}

// Value of `attribute` on `object` as of `at`: the latest change with
// change.at <= at wins; ties at one instant are broken by cause-event
// order and then cause id, so caused changes override uncaused ones.
// Falls back to the initial value, then to null.
inline AttributeValue resolve_attribute(const OCLog& log, const std::string& object,
                                        const std::string& attribute, Timestamp at) {
  const Object* obj = log.find_object(object);
  if (obj == nullptr) throw LookupError(LookupError::What::UnknownObject, object);
  if (log.meta().mode == Mode::Strict) {
    auto schema = effective_schema_of(log.object_types(), obj->type);
    if (!schema.count(attribute)) throw LookupError(LookupError::What::UnknownAttribute, attribute);
  }

  const AttributeChange* best = nullptr;
  auto rank = [&](const AttributeChange& c) {
    const std::size_t order = c.cause ? log.event_order(*c.cause) : 0;
    return std::make_tuple(c.at, c.cause.has_value(), order, c.cause ? *c.cause : std::string());
  };
  for (const auto& c : obj->changes) {
    if (c.attribute != attribute || at < c.at) continue;
    if (best == nullptr || rank(*best) < rank(c)) best = &c;
  }
  if (best != nullptr) return best->value;
  auto it = obj->initial_attributes.find(attribute);
  if (it != obj->initial_attributes.end()) return it->second;
  return AttributeValue();
}

struct GraphEdge {
  std::string source;
  std::string target;
  std::string qualifier;

  auto operator<=>(const GraphEdge&) const = default;
};

// Snapshot of the object graph: relations whose validity covers `at`.
inline std::set<GraphEdge> object_graph_at(const OCLog& log, Timestamp at) {
  std::set<GraphEdge> out;
  for (const auto& o : log.objects())
    for (const auto& r : o.relations)
      if (r.active_at(at)) out.insert({r.source, r.target, r.qualifier});
  return out;
}

// Reachability over a directed edge set: all (source, target) pairs
// connected by a path of length >= 1. BFS from each source node.
inline std::set<std::pair<std::string, std::string>> reachability_closure(
    const std::set<std::pair<std::string, std::string>>& edges) {
  std::map<std::string, std::vector<std::string>> adjacency;
  for (const auto& [s, t] : edges) adjacency[s].push_back(t);

  std::set<std::pair<std::string, std::string>> out;
  for (const auto& [start, _] : adjacency) {
    std::vector<std::string> frontier{start};
    std::set<std::string> visited;
    while (!frontier.empty()) {
      std::string node = std::move(frontier.back());
      frontier.pop_back();
      auto it = adjacency.find(node);
      if (it == adjacency.end()) continue;
      for (const auto& next : it->second) {
        if (visited.insert(next).second) frontier.push_back(next);
      }
    }
    for (const auto& reached : visited) out.insert({start, reached});
  }
  return out;
}

// Transitive closure of the snapshot graph, qualifiers ignored.
inline std::set<std::pair<std::string, std::string>> derived_relation_closure(const OCLog& log,
                                                                              Timestamp at) {
  std::set<std::pair<std::string, std::string>> edges;
  for (const auto& e : object_graph_at(log, at)) edges.insert({e.source, e.target});
  return reachability_closure(edges);
}

}  // namespace oclog
