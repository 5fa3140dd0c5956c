#pragma once
// Loss accounting for lossy writes. Every record a writer cannot express
// is itemized: a summary entry (spec key, count, sample locations) plus the
// full dropped payload, so that decoded-output + report can reconstruct the
// original log. Nothing is ever dropped silently.

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "oclog/model.hpp"
#include "oclog/specs.hpp"

namespace oclog {

// Keys are spec ids, optionally refined by a facet naming what aspect of
// the spec the loss touches (e.g. S16 traceability when cause links drop).
struct LossKey {
  SpecId spec;
  std::string facet;

  auto operator<=>(const LossKey&) const = default;

  std::string str() const {
    std::string s = to_string(spec);
    if (!facet.empty()) s += "_" + facet;
    return s;
  }

  static LossKey of(SpecId s) { return {s, {}}; }
};

// Full payloads for dropped information, keyed by what they restore.
namespace loss {

struct DroppedRelation {  // S9: whole O2O relation removed
  O2ORelation relation;
};
struct DroppedQualifier {  // S10: E2O qualifier removed
  std::string event;
  std::string object;
  std::string qualifier;
  // True when the link itself collapsed into another link to the same
  // object; restore must re-append it rather than re-qualify the bare one.
  bool collapsed = false;
};
struct DroppedValidity {  // S11: relation kept, bounds removed
  O2ORelation original;   // relation as it was before stripping
};
struct DroppedParent {  // S12: type kept, parent link removed
  std::string type;
  std::string parent;
};
struct DroppedChange {  // S8: whole attribute change removed
  std::string object;
  AttributeChange change;
};
struct DroppedCause {  // S16 traceability: change kept, cause removed
  std::string object;
  std::string attribute;
  Timestamp at;
  std::string cause;
};
struct DroppedRelationCause {  // S16 traceability: relation kept, cause removed
  std::string source;
  std::string target;
  std::string qualifier;
  std::string cause;
};

}  // namespace loss

struct LossRecord {
  LossKey key;
  std::string location;
  std::variant<loss::DroppedRelation, loss::DroppedQualifier, loss::DroppedValidity,
               loss::DroppedParent, loss::DroppedChange, loss::DroppedCause,
               loss::DroppedRelationCause>
      payload;
};

struct LossEntry {
  std::size_t count = 0;
  std::vector<std::string> sample_locations;  // at most kMaxSamples

  static constexpr std::size_t kMaxSamples = 10;
};

class LossReport {
 public:
  bool lossless() const { return entries_.empty(); }

  const std::map<LossKey, LossEntry>& entries() const { return entries_; }
  const std::vector<LossRecord>& records() const { return records_; }

  std::size_t count(LossKey key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? 0 : it->second.count;
  }
  std::size_t count(SpecId spec) const { return count(LossKey::of(spec)); }

  template <typename Payload>
  void add(LossKey key, std::string location, Payload payload) {
    auto& entry = entries_[key];
    entry.count += 1;
    if (entry.sample_locations.size() < LossEntry::kMaxSamples)
      entry.sample_locations.push_back(location);
    records_.push_back({key, std::move(location), std::move(payload)});
  }

  void merge(const LossReport& other) {
    for (const auto& rec : other.records_) {
      auto& entry = entries_[rec.key];
      entry.count += 1;
      if (entry.sample_locations.size() < LossEntry::kMaxSamples)
        entry.sample_locations.push_back(rec.location);
      records_.push_back(rec);
    }
  }

 private:
  std::map<LossKey, LossEntry> entries_;
  std::vector<LossRecord> records_;
};

}  // namespace oclog
