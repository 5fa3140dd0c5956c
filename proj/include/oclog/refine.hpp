#pragma once
// The three log refinements: event-keying of attribute changes, reification
// of N:M relations (with removal of stored transitive edges), and
// materialization of dynamic relations as dynamic attributes.

#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "oclog/model.hpp"
#include "oclog/validate.hpp"

namespace oclog {

struct RefinementOutcome {
  OCLog log;
  std::size_t resolved = 0;
  std::vector<AmbiguousChange> unresolved;
  std::vector<std::string> created_objects;
};

namespace refinedetail {

inline OCLog rebuild(std::vector<ObjectType> types, std::vector<EventType> etypes,
                     std::vector<Object> objects, std::vector<Event> events, const LogMeta& meta) {
  // Refinements can create objects that participate in no event, which a
  // strict rebuild would reject; fall back to lax rather than fail.
  auto r = build_log(types, etypes, objects, events, meta.mode, meta);
  if (!r.ok() && meta.mode == Mode::Strict) {
    LogMeta lax = meta;
    lax.mode = Mode::Lax;
    r = build_log(std::move(types), std::move(etypes), std::move(objects), std::move(events),
                  Mode::Lax, lax);
  }
  if (!r.ok())
    throw LookupError(LookupError::What::InvalidConfig,
                      "refinement produced an invalid log: " + r.error_summary());
  return std::move(*r.log);
}

inline std::uint64_t fnv1a(const std::string& s, std::uint64_t h = 0xcbf29ce484222325ull) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string hex16(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace refinedetail

// --------------------------------------------------------------------------
// Traceable dynamic attributes
// --------------------------------------------------------------------------

// Gives every cause-less change whose instant isolates exactly one event on
// the owning object that event as its cause. Changes with zero or several
// candidates stay untouched and are reported unresolved. Idempotent; never
// reassigns an existing cause; alters no value or timestamp.
inline RefinementOutcome key_changes_by_event(const OCLog& log) {
  // (instant, object) -> sole candidate event id, or nullopt when contested.
  std::map<std::pair<std::int64_t, std::string>, std::optional<std::string>> sole;
  std::map<std::pair<std::int64_t, std::string>, std::size_t> counts;
  for (const auto& e : log.events()) {
    std::set<std::string> touched;
    for (const auto& link : e.e2o) touched.insert(link.object);
    for (const auto& id : touched) {
      auto key = std::make_pair(e.timestamp.millis(), id);
      counts[key] += 1;
      if (counts[key] == 1)
        sole[key] = e.id;
      else
        sole[key] = std::nullopt;
    }
  }

  RefinementOutcome out;
  std::vector<Object> objects(log.objects().begin(), log.objects().end());
  for (auto& o : objects) {
    std::set<std::tuple<std::string, std::int64_t, std::string>> caused_keys;
    for (const auto& c : o.changes)
      if (c.cause) caused_keys.insert({c.attribute, c.at.millis(), *c.cause});
    for (auto& c : o.changes) {
      if (c.cause) continue;
      const auto key = std::make_pair(c.at.millis(), o.id);
      auto it = counts.find(key);
      const std::size_t n = it == counts.end() ? 0 : it->second;
      if (n != 1) {
        out.unresolved.push_back({o.id, c.attribute, c.at, n});
        continue;
      }
      const std::string& candidate = *sole.at(key);
      // A caused twin at the same instant would collide with the
      // uniqueness of (attribute, at, cause); leave such changes alone.
      if (caused_keys.count({c.attribute, c.at.millis(), candidate})) {
        out.unresolved.push_back({o.id, c.attribute, c.at, n});
        continue;
      }
      c.cause = candidate;
      caused_keys.insert({c.attribute, c.at.millis(), candidate});
      out.resolved += 1;
    }
  }
  std::sort(out.unresolved.begin(), out.unresolved.end());

  out.log = refinedetail::rebuild(log.object_types(), log.event_types(), std::move(objects),
                                  log.events(), log.meta());
  return out;
}

// --------------------------------------------------------------------------
// Relation cardinality
// --------------------------------------------------------------------------

enum class Cardinality { OneToOne, OneToMany, ManyToOne, ManyToMany };

inline const char* to_string(Cardinality c) {
  switch (c) {
    case Cardinality::OneToOne: return "1:1";
    case Cardinality::OneToMany: return "1:N";
    case Cardinality::ManyToOne: return "N:1";
    case Cardinality::ManyToMany: return "N:M";
  }
  return "";
}

// Scans every relation carrying the qualifier across the whole horizon.
inline Cardinality infer_cardinality(const OCLog& log, const std::string& qualifier) {
  std::map<std::string, std::set<std::string>> targets_of, sources_of;
  bool seen = false;
  for (const auto& o : log.objects()) {
    for (const auto& r : o.relations) {
      if (r.qualifier != qualifier) continue;
      seen = true;
      targets_of[r.source].insert(r.target);
      sources_of[r.target].insert(r.source);
    }
  }
  if (!seen) throw LookupError(LookupError::What::UnknownQualifier, qualifier);

  std::size_t fanout = 0, fanin = 0;
  for (const auto& [s, ts] : targets_of) fanout = std::max(fanout, ts.size());
  for (const auto& [t, ss] : sources_of) fanin = std::max(fanin, ss.size());
  if (fanout > 1 && fanin > 1) return Cardinality::ManyToMany;
  if (fanout > 1) return Cardinality::OneToMany;
  if (fanin > 1) return Cardinality::ManyToOne;
  return Cardinality::OneToOne;
}

// --------------------------------------------------------------------------
// Scalable object relations (reification)
// --------------------------------------------------------------------------

namespace refinedetail {

// Instants at which graph snapshots can differ: event timestamps plus the
// validity boundaries of the qualifier's relations.
inline std::vector<Timestamp> probe_instants(const OCLog& log,
                                             const std::vector<O2ORelation>& edges) {
  std::set<std::int64_t> instants;
  for (const auto& e : log.events()) instants.insert(e.timestamp.millis());
  for (const auto& r : edges) {
    if (r.valid_from) instants.insert(r.valid_from->millis());
    if (r.valid_to) instants.insert(r.valid_to->millis());
  }
  if (instants.empty()) instants.insert(0);
  std::vector<Timestamp> out;
  for (auto ms : instants) out.push_back(Timestamp::from_millis(ms));
  return out;
}

// Is `target` reachable from `source` over the given edges active at `at`,
// excluding the edge at `skip`?
inline bool reachable_at(const std::vector<O2ORelation>& edges, std::size_t skip,
                         const std::string& source, const std::string& target, Timestamp at) {
  std::map<std::string, std::vector<std::string>> adjacency;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (i == skip || !edges[i].active_at(at)) continue;
    adjacency[edges[i].source].push_back(edges[i].target);
  }
  std::vector<std::string> frontier{source};
  std::set<std::string> visited;
  while (!frontier.empty()) {
    std::string node = std::move(frontier.back());
    frontier.pop_back();
    auto it = adjacency.find(node);
    if (it == adjacency.end()) continue;
    for (const auto& next : it->second) {
      if (next == target) return true;
      if (visited.insert(next).second) frontier.push_back(next);
    }
  }
  return false;
}

}  // namespace refinedetail

// Reifies every many-to-many qualifier into link objects (one per original
// relation) whose two half-edges subdivide the original edge, preserving
// directed connectivity at every instant. Stored edges already implied by
// same-qualifier paths are removed first. An optional qualifier set
// restricts which qualifiers are considered.
inline RefinementOutcome reify_relations(const OCLog& log,
                                         std::optional<std::set<std::string>> qualifiers = {}) {
  RefinementOutcome out;

  std::set<std::string> all_qualifiers;
  for (const auto& o : log.objects())
    for (const auto& r : o.relations) all_qualifiers.insert(r.qualifier);
  std::set<std::string> candidates;
  for (const auto& q : all_qualifiers)
    if (!qualifiers || qualifiers->count(q)) candidates.insert(q);

  std::vector<ObjectType> types(log.object_types());
  std::vector<Object> objects(log.objects());
  std::map<std::string, std::size_t> object_index;
  for (std::size_t i = 0; i < objects.size(); ++i) object_index[objects[i].id] = i;

  std::set<std::string> used_type_names;
  for (const auto& t : types) used_type_names.insert(t.name);
  std::set<std::string> used_ids;
  for (const auto& o : objects) used_ids.insert(o.id);
  for (const auto& e : log.events()) used_ids.insert(e.id);

  for (const auto& q : candidates) {
    // Pull this qualifier's edges out of their owners.
    std::vector<O2ORelation> edges;
    for (auto& o : objects) {
      auto it = o.relations.begin();
      while (it != o.relations.end()) {
        if (it->qualifier == q) {
          edges.push_back(*it);
          it = o.relations.erase(it);
        } else {
          ++it;
        }
      }
    }
    std::sort(edges.begin(), edges.end(), [](const O2ORelation& a, const O2ORelation& b) {
      return std::tie(a.source, a.target, a.valid_from, a.valid_to, a.change_cause) <
             std::tie(b.source, b.target, b.valid_from, b.valid_to, b.change_cause);
    });

    // Remove stored transitive edges: an edge goes when, at every instant
    // it is active, its endpoints stay connected through the others.
    const auto probes = refinedetail::probe_instants(log, edges);
    for (std::size_t i = 0; i < edges.size();) {
      bool redundant = true;
      for (const auto& at : probes) {
        if (!edges[i].active_at(at)) continue;
        if (!refinedetail::reachable_at(edges, i, edges[i].source, edges[i].target, at)) {
          redundant = false;
          break;
        }
      }
      if (redundant) {
        edges.erase(edges.begin() + static_cast<std::ptrdiff_t>(i));
        out.resolved += 1;
      } else {
        ++i;
      }
    }

    // Cardinality over the remaining edges decides reification.
    std::map<std::string, std::set<std::string>> targets_of, sources_of;
    for (const auto& r : edges) {
      targets_of[r.source].insert(r.target);
      sources_of[r.target].insert(r.source);
    }
    std::size_t fanout = 0, fanin = 0;
    for (const auto& [s, ts] : targets_of) fanout = std::max(fanout, ts.size());
    for (const auto& [t, ss] : sources_of) fanin = std::max(fanin, ss.size());
    const bool many_to_many = fanout > 1 && fanin > 1;

    if (!many_to_many) {
      for (const auto& r : edges) objects[object_index.at(r.source)].relations.push_back(r);
      continue;
    }

    std::string link_type = q + "_link";
    while (used_type_names.count(link_type)) link_type += "_";
    used_type_names.insert(link_type);
    types.push_back({link_type, std::nullopt, {}});
    std::string src_qualifier = q + ":src";
    while (all_qualifiers.count(src_qualifier)) src_qualifier += "_";
    std::string tgt_qualifier = q + ":tgt";
    while (all_qualifiers.count(tgt_qualifier)) tgt_qualifier += "_";

    for (const auto& r : edges) {
      const std::string seed =
          q + "|" + r.source + "|" + r.target + "|" + (r.valid_from ? r.valid_from->to_iso() : "");
      std::string link_id = link_type + ":" + refinedetail::hex16(refinedetail::fnv1a(seed));
      int n = 2;
      while (used_ids.count(link_id))
        link_id = link_type + ":" + refinedetail::hex16(refinedetail::fnv1a(seed)) + "-" +
                  std::to_string(n++);
      used_ids.insert(link_id);

      Object link;
      link.id = link_id;
      link.type = link_type;
      // The source half-edge carries the original validity and cause; the
      // target half is static. The subdivided path is then active exactly
      // when the original edge was, and the link object itself never
      // acquires dynamic state of its own.
      link.relations.push_back(
          {link_id, r.target, tgt_qualifier, std::nullopt, std::nullopt, std::nullopt});
      objects[object_index.at(r.source)].relations.push_back(
          {r.source, link_id, src_qualifier, r.valid_from, r.valid_to, r.change_cause});
      object_index[link.id] = objects.size();
      objects.push_back(std::move(link));
      out.created_objects.push_back(link_id);
      out.resolved += 1;
    }
  }

  out.log = refinedetail::rebuild(std::move(types), log.event_types(), std::move(objects),
                                  log.events(), log.meta());
  return out;
}

// --------------------------------------------------------------------------
// Dynamic object relations as dynamic attributes
// --------------------------------------------------------------------------

inline constexpr const char* kRelationAttributePrefix = "rel:";

// Materializes each object's relations per qualifier as an attribute
// "rel:<qualifier>" holding the sorted list of active target ids: the
// snapshot at minus-infinity becomes the initial value and every validity
// boundary becomes an attribute change (caused when the relations starting
// at that instant agree on a cause event with a matching timestamp). The
// relations themselves are kept; the attributes are an added encoding that
// formats without dynamic relations can persist.
inline RefinementOutcome relations_as_dynamic_attributes(const OCLog& log) {
  RefinementOutcome out;
  std::vector<ObjectType> types(log.object_types());
  std::vector<Object> objects(log.objects());
  std::map<std::string, std::set<std::string>> new_type_attrs;

  for (auto& o : objects) {
    std::map<std::string, std::vector<const O2ORelation*>> by_qualifier;
    for (const auto& r : o.relations) by_qualifier[r.qualifier].push_back(&r);

    for (const auto& [q, rels] : by_qualifier) {
      const std::string attr = std::string(kRelationAttributePrefix) + q;
      new_type_attrs[o.type].insert(attr);

      auto snapshot = [&](std::optional<Timestamp> at) {
        std::set<std::string> targets;
        for (const auto* r : rels) {
          const bool active = at ? r->active_at(*at) : !r->valid_from;
          if (active) targets.insert(r->target);
        }
        AttributeValue::List list;
        for (const auto& t : targets) list.push_back(AttributeValue(t));
        return AttributeValue(std::move(list));
      };

      o.initial_attributes[attr] = snapshot(std::nullopt);

      std::set<std::int64_t> boundaries;
      for (const auto* r : rels) {
        if (r->valid_from) boundaries.insert(r->valid_from->millis());
        if (r->valid_to) boundaries.insert(r->valid_to->millis());
        if (r->valid_from || r->valid_to || r->change_cause) out.resolved += 1;
      }

      for (auto ms : boundaries) {
        const Timestamp at = Timestamp::from_millis(ms);
        AttributeChange c;
        c.attribute = attr;
        c.value = snapshot(at);
        c.at = at;
        // Cause only when the relations starting here agree on one event
        // whose timestamp matches the boundary.
        std::set<std::string> onset_causes;
        bool uncaused_onset = false;
        for (const auto* r : rels) {
          if (r->valid_from && r->valid_from->millis() == ms) {
            if (r->change_cause)
              onset_causes.insert(*r->change_cause);
            else
              uncaused_onset = true;
          }
        }
        if (onset_causes.size() == 1 && !uncaused_onset) {
          const Event* e = log.find_event(*onset_causes.begin());
          if (e && e->timestamp == at) c.cause = e->id;
        }
        o.changes.push_back(std::move(c));
      }
    }
  }

  for (auto& t : types) {
    auto it = new_type_attrs.find(t.name);
    if (it == new_type_attrs.end()) continue;
    for (const auto& attr : it->second) t.declared_attributes[attr] = ValueKind::List;
  }

  out.log = refinedetail::rebuild(std::move(types), log.event_types(), std::move(objects),
                                  log.events(), log.meta());
  return out;
}

// Rebuilds the relation graph from materialized "rel:" attributes alone;
// the round-trip contract for relations_as_dynamic_attributes.
inline std::set<GraphEdge> graph_from_relation_attributes(const OCLog& log, Timestamp at) {
  std::set<GraphEdge> out;
  const std::size_t prefix_len = std::string(kRelationAttributePrefix).size();
  for (const auto& o : log.objects()) {
    std::set<std::string> attrs;
    for (const auto& [name, v] : o.initial_attributes)
      if (name.rfind(kRelationAttributePrefix, 0) == 0) attrs.insert(name);
    for (const auto& c : o.changes)
      if (c.attribute.rfind(kRelationAttributePrefix, 0) == 0) attrs.insert(c.attribute);
    for (const auto& attr : attrs) {
      const AttributeValue v = resolve_attribute(log, o.id, attr, at);
      if (v.kind() != ValueKind::List) continue;
      for (const auto& target : v.as_list())
        if (target.kind() == ValueKind::Text)
          out.insert({o.id, target.as_text(), attr.substr(prefix_len)});
    }
  }
  return out;
}

}  // namespace oclog
