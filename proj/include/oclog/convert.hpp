#pragma once
// Format-to-format conversion. Every conversion routes through the
// canonical model so loss accounting happens in exactly one place; the
// report's full records are strong enough to reconstruct the source log
// from the converted output.

#include <set>
#include <string>
#include <vector>

#include "oclog/formats.hpp"
#include "oclog/loss.hpp"
#include "oclog/model.hpp"
#include "oclog/specs.hpp"

namespace oclog {

struct ConvertResult {
  std::string bytes;
  LossReport loss;
  std::vector<codec::CodecWarning> warnings;
};

inline ConvertResult convert(const std::string& input, codec::FormatId source,
                             codec::FormatId target, codec::ReadOptions opts = {}) {
  auto decoded = codec::read_bytes(source, input, opts);
  auto encoded = codec::write_bytes(target, decoded.log);
  return {std::move(encoded.bytes), std::move(encoded.loss), std::move(decoded.warnings)};
}

// Static upper bound on what a conversion can drop: the specs the source
// codec supports more strongly than the target. Every concrete LossReport
// key set is contained in this set.
inline std::set<SpecId> loss_preview(codec::FormatId source, codec::FormatId target) {
  const auto src = codec::codec_capabilities(source);
  const auto tgt = codec::codec_capabilities(target);
  std::set<SpecId> out;
  for (SpecId s : kAllSpecs)
    if (src[s].rank() > tgt[s].rank()) out.insert(s);
  return out;
}

inline std::set<SpecId> loss_preview(const std::string& source, const std::string& target) {
  auto s = codec::format_from_string(source);
  if (!s) throw LookupError(LookupError::What::UnknownFormatName, source);
  auto t = codec::format_from_string(target);
  if (!t) throw LookupError(LookupError::What::UnknownFormatName, target);
  return loss_preview(*s, *t);
}

// --------------------------------------------------------------------------
// Reconstruction from output + loss records (the no-silent-loss check).
// --------------------------------------------------------------------------

inline OCLog restore_losses(const OCLog& decoded, const LossReport& loss) {
  std::vector<ObjectType> types(decoded.object_types());
  std::vector<EventType> etypes(decoded.event_types());
  std::vector<Object> objects(decoded.objects());
  std::vector<Event> events(decoded.events());

  auto object_of = [&](const std::string& id) -> Object& {
    for (auto& o : objects)
      if (o.id == id) return o;
    throw LookupError(LookupError::What::UnknownObject, id);
  };
  auto event_of = [&](const std::string& id) -> Event& {
    for (auto& e : events)
      if (e.id == id) return e;
    throw LookupError(LookupError::What::UnknownObject, id);
  };

  for (const auto& rec : loss.records()) {
    if (const auto* p = std::get_if<loss::DroppedRelation>(&rec.payload)) {
      object_of(p->relation.source).relations.push_back(p->relation);
    } else if (const auto* p = std::get_if<loss::DroppedQualifier>(&rec.payload)) {
      Event& e = event_of(p->event);
      if (p->collapsed) {
        e.e2o.push_back({p->object, p->qualifier});
      } else {
        bool requalified = false;
        for (auto& link : e.e2o) {
          if (link.object == p->object && !link.qualifier) {
            link.qualifier = p->qualifier;
            requalified = true;
            break;
          }
        }
        if (!requalified) e.e2o.push_back({p->object, p->qualifier});
      }
    } else if (const auto* p = std::get_if<loss::DroppedValidity>(&rec.payload)) {
      Object& o = object_of(p->original.source);
      for (auto it = o.relations.begin(); it != o.relations.end(); ++it) {
        if (it->target == p->original.target && it->qualifier == p->original.qualifier &&
            !it->valid_from && !it->valid_to && !it->change_cause) {
          o.relations.erase(it);
          break;
        }
      }
      o.relations.push_back(p->original);
    } else if (const auto* p = std::get_if<loss::DroppedParent>(&rec.payload)) {
      for (auto& t : types)
        if (t.name == p->type) t.parent = p->parent;
    } else if (const auto* p = std::get_if<loss::DroppedChange>(&rec.payload)) {
      object_of(p->object).changes.push_back(p->change);
    } else if (const auto* p = std::get_if<loss::DroppedCause>(&rec.payload)) {
      Object& o = object_of(p->object);
      for (auto& c : o.changes) {
        if (c.attribute == p->attribute && c.at == p->at && !c.cause) {
          c.cause = p->cause;
          break;
        }
      }
    } else if (const auto* p = std::get_if<loss::DroppedRelationCause>(&rec.payload)) {
      Object& o = object_of(p->source);
      for (auto& r : o.relations) {
        if (r.target == p->target && r.qualifier == p->qualifier && !r.valid_from &&
            !r.valid_to && !r.change_cause) {
          r.change_cause = p->cause;
          break;
        }
      }
    }
  }

  auto rebuilt = build_log(std::move(types), std::move(etypes), std::move(objects),
                           std::move(events), decoded.meta().mode, decoded.meta());
  if (!rebuilt.ok())
    throw LookupError(LookupError::What::InvalidConfig,
                      "loss restoration produced an invalid log: " + rebuilt.error_summary());
  return std::move(*rebuilt.log);
}

inline codec::Json loss_report_to_json(const LossReport& loss, codec::FormatId source,
                                       codec::FormatId target) {
  codec::Json j = codec::Json::object();
  j["schema_version"] = 1;
  j["source"] = codec::to_string(source);
  j["target"] = codec::to_string(target);
  j["lossless"] = loss.lossless();
  codec::Json entries = codec::Json::object();
  for (const auto& [key, entry] : loss.entries()) {
    codec::Json e = codec::Json::object();
    e["count"] = entry.count;
    codec::Json samples = codec::Json::array();
    for (const auto& s : entry.sample_locations) samples.push_back(s);
    e["samples"] = std::move(samples);
    entries[key.str()] = std::move(e);
  }
  j["entries"] = std::move(entries);
  return j;
}

}  // namespace oclog
