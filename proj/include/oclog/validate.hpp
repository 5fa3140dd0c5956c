#pragma once
// Instance-level conformance against the 19 specifications. The report is
// deterministic: identical logs serialize to identical documents.

#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "oclog/analysis.hpp"
#include "oclog/formats.hpp"
#include "oclog/model.hpp"
#include "oclog/specs.hpp"

namespace oclog {

enum class Verdict { Satisfied, Violated, Measured, NotApplicable };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Satisfied: return "satisfied";
    case Verdict::Violated: return "violated";
    case Verdict::Measured: return "measured";
    case Verdict::NotApplicable: return "not_applicable";
  }
  return "";
}

struct Finding {
  std::string id;      // event / object / attribute location
  std::string detail;

  bool operator==(const Finding&) const = default;
};

struct SpecResult {
  SpecId spec;
  Verdict verdict = Verdict::Satisfied;
  std::size_t count = 0;  // entities covered by a Satisfied verdict
  std::vector<Finding> findings;
  std::map<std::string, double> metrics;
};

struct ConformanceReport {
  Mode mode = Mode::Lax;
  std::vector<SpecResult> specs;  // S1..S19 in order

  const SpecResult& operator[](SpecId s) const { return specs[static_cast<std::size_t>(s)]; }

  bool any_violation() const {
    for (const auto& r : specs)
      if (r.verdict == Verdict::Violated) return true;
    return false;
  }

  codec::Json to_json() const {
    codec::Json j = codec::Json::object();
    j["schema_version"] = 1;
    j["mode"] = oclog::to_string(mode);
    codec::Json arr = codec::Json::array();
    for (const auto& r : specs) {
      codec::Json s = codec::Json::object();
      s["id"] = oclog::to_string(r.spec);
      s["dimension"] = oclog::to_string(dimension_of(r.spec));
      s["specification"] = sentence_of(r.spec);
      s["verdict"] = oclog::to_string(r.verdict);
      if (r.verdict == Verdict::Satisfied) s["count"] = r.count;
      if (!r.findings.empty()) {
        codec::Json f = codec::Json::array();
        for (const auto& finding : r.findings) {
          codec::Json jf = codec::Json::object();
          jf["id"] = finding.id;
          jf["detail"] = finding.detail;
          f.push_back(std::move(jf));
        }
        s["findings"] = std::move(f);
      }
      if (!r.metrics.empty()) {
        codec::Json m = codec::Json::object();
        for (const auto& [k, v] : r.metrics) m[k] = v;
        s["metrics"] = std::move(m);
      }
      arr.push_back(std::move(s));
    }
    j["specs"] = std::move(arr);
    return j;
  }
};

struct AmbiguousChange {
  std::string object;
  std::string attribute;
  Timestamp at;
  std::size_t candidate_events = 0;  // events at `at` touching the object

  bool operator==(const AmbiguousChange&) const = default;
  auto operator<=>(const AmbiguousChange&) const = default;
};

// Changes without a cause whose instant does not isolate exactly one
// candidate event on the owning object: zero candidates leave the change
// orphaned, two or more leave it ambiguous.
inline std::vector<AmbiguousChange> find_ambiguous_changes(const OCLog& log) {
  // (timestamp, object) -> number of events at that instant touching it.
  std::map<std::pair<std::int64_t, std::string>, std::size_t> candidates;
  for (const auto& e : log.events()) {
    std::set<std::string> touched;
    for (const auto& link : e.e2o) touched.insert(link.object);
    for (const auto& id : touched) candidates[{e.timestamp.millis(), id}] += 1;
  }
  std::vector<AmbiguousChange> out;
  for (const auto& o : log.objects()) {
    for (const auto& c : o.changes) {
      if (c.cause) continue;
      auto it = candidates.find({c.at.millis(), o.id});
      const std::size_t n = it == candidates.end() ? 0 : it->second;
      if (n != 1) out.push_back({o.id, c.attribute, c.at, n});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct DuplicationMetrics {
  // Unordered object pairs with relations stored in both directions.
  std::size_t symmetric_duplicate_pairs = 0;
  // Stored edges already implied by same-qualifier paths over the others.
  std::size_t stored_transitive_edges = 0;

  bool operator==(const DuplicationMetrics&) const = default;
};

inline DuplicationMetrics duplication_metrics(const OCLog& log) {
  DuplicationMetrics m;

  std::set<std::pair<std::string, std::string>> directed;
  std::map<std::string, std::set<std::pair<std::string, std::string>>> by_qualifier;
  for (const auto& o : log.objects()) {
    for (const auto& r : o.relations) {
      if (r.source == r.target) continue;
      directed.insert({r.source, r.target});
      by_qualifier[r.qualifier].insert({r.source, r.target});
    }
  }
  for (const auto& [s, t] : directed)
    if (s < t && directed.count({t, s})) m.symmetric_duplicate_pairs += 1;

  for (const auto& [qualifier, edges] : by_qualifier) {
    for (const auto& edge : edges) {
      auto rest = edges;
      rest.erase(edge);
      if (reachability_closure(rest).count(edge)) m.stored_transitive_edges += 1;
    }
  }
  return m;
}

inline ConformanceReport validate(const OCLog& log, Mode mode) {
  ConformanceReport report;
  report.mode = mode;
  report.specs.resize(kAllSpecs.size());
  for (SpecId s : kAllSpecs) report.specs[static_cast<std::size_t>(s)].spec = s;
  auto spec = [&](SpecId s) -> SpecResult& {
    return report.specs[static_cast<std::size_t>(s)];
  };

  std::size_t total_changes = 0, total_relations = 0, total_initial_attrs = 0;
  std::size_t qualified_links = 0, dynamic_relations = 0;
  for (const auto& o : log.objects()) {
    total_changes += o.changes.size();
    total_relations += o.relations.size();
    total_initial_attrs += o.initial_attributes.size();
    for (const auto& r : o.relations)
      if (r.valid_from || r.valid_to || r.change_cause) dynamic_relations += 1;
  }
  std::size_t event_attrs = 0;
  for (const auto& e : log.events()) {
    event_attrs += e.attributes.size();
    for (const auto& link : e.e2o)
      if (link.qualifier) qualified_links += 1;
  }
  std::size_t subtyped = 0;
  for (const auto& t : log.object_types())
    if (t.parent) subtyped += 1;

  // S1-S7 hold by construction for any built log; report the coverage.
  spec(SpecId::S1) = {SpecId::S1, Verdict::Satisfied, log.events().size(), {}, {}};
  spec(SpecId::S2) = {SpecId::S2, Verdict::Satisfied, log.events().size(), {}, {}};
  spec(SpecId::S3) = {SpecId::S3, Verdict::Satisfied, log.events().size(), {}, {}};
  spec(SpecId::S4) = {SpecId::S4, Verdict::Satisfied, event_attrs, {}, {}};
  spec(SpecId::S5) = {SpecId::S5, Verdict::Satisfied, log.objects().size(), {}, {}};
  spec(SpecId::S6) = {SpecId::S6, Verdict::Satisfied, log.objects().size(), {}, {}};
  spec(SpecId::S7) = {SpecId::S7, Verdict::Satisfied, total_initial_attrs, {}, {}};

  // S8/S16: a change is traceable when its cause is recorded or uniquely
  // recoverable from its instant.
  const auto ambiguous = find_ambiguous_changes(log);
  {
    auto& s8 = spec(SpecId::S8);
    auto& s16 = spec(SpecId::S16);
    for (const auto& a : ambiguous) {
      Finding f{a.object + "/" + a.attribute + "@" + a.at.to_iso(),
                a.candidate_events == 0
                    ? "no event at the change instant touches the object"
                    : std::to_string(a.candidate_events) + " simultaneous candidate events"};
      s8.findings.push_back(f);
      s16.findings.push_back(std::move(f));
    }
    s8.verdict = s8.findings.empty() ? Verdict::Satisfied : Verdict::Violated;
    s8.count = total_changes;
    s16.verdict = s16.findings.empty() ? Verdict::Satisfied : Verdict::Violated;
    s16.count = total_changes;
  }

  spec(SpecId::S9) = {SpecId::S9, Verdict::Satisfied, total_relations, {}, {}};
  spec(SpecId::S10) = {SpecId::S10, Verdict::Satisfied, qualified_links + total_relations, {}, {}};
  spec(SpecId::S11) = {SpecId::S11, Verdict::Satisfied, dynamic_relations, {}, {}};
  spec(SpecId::S12) = {SpecId::S12, Verdict::Satisfied, subtyped, {}, {}};

  // S13/S14: cardinality constraints; only strict logs promise them.
  if (mode == Mode::Strict) {
    auto& s13 = spec(SpecId::S13);
    for (const auto& e : log.events())
      if (e.e2o.empty()) s13.findings.push_back({e.id, "event relates to no object"});
    s13.verdict = s13.findings.empty() ? Verdict::Satisfied : Verdict::Violated;
    s13.count = log.events().size();

    auto& s14 = spec(SpecId::S14);
    std::set<std::string> touched;
    for (const auto& e : log.events())
      for (const auto& link : e.e2o) touched.insert(link.object);
    for (const auto& o : log.objects())
      if (!touched.count(o.id)) s14.findings.push_back({o.id, "object appears in no event"});
    s14.verdict = s14.findings.empty() ? Verdict::Satisfied : Verdict::Violated;
    s14.count = log.objects().size();
  } else {
    spec(SpecId::S13).verdict = Verdict::NotApplicable;
    spec(SpecId::S14).verdict = Verdict::NotApplicable;
  }

  // S15: recover every trace constructively and check its invariants.
  {
    auto& s15 = spec(SpecId::S15);
    for (const auto& o : log.objects()) {
      Trace trace = trace_of(log, o.id);
      for (std::size_t i = 1; i < trace.steps.size(); ++i)
        if (trace.steps[i].timestamp < trace.steps[i - 1].timestamp)
          s15.findings.push_back({o.id, "trace steps out of order"});
    }
    s15.verdict = s15.findings.empty() ? Verdict::Satisfied : Verdict::Violated;
    s15.count = log.objects().size();
  }

  // S17: change records must be uniquely attributable.
  {
    auto& s17 = spec(SpecId::S17);
    for (const auto& o : log.objects()) {
      std::map<std::pair<std::string, std::int64_t>, std::set<AttributeValue>> uncaused;
      for (const auto& c : o.changes)
        if (!c.cause) uncaused[{c.attribute, c.at.millis()}].insert(c.value);
      for (const auto& [key, values] : uncaused)
        if (values.size() > 1)
          s17.findings.push_back(
              {o.id + "/" + key.first + "@" + Timestamp::from_millis(key.second).to_iso(),
               std::to_string(values.size()) + " conflicting uncaused values at one instant"});
    }
    s17.verdict = s17.findings.empty() ? Verdict::Satisfied : Verdict::Violated;
    s17.count = total_changes;
  }

  // S18/S19 are comparative by nature; they are measured, never pass/fail.
  {
    auto& s18 = spec(SpecId::S18);
    s18.verdict = Verdict::Measured;
    const auto dup = duplication_metrics(log);
    s18.metrics["symmetric_duplicate_pairs"] = static_cast<double>(dup.symmetric_duplicate_pairs);
    s18.metrics["stored_transitive_edges"] = static_cast<double>(dup.stored_transitive_edges);
  }
  {
    auto& s19 = spec(SpecId::S19);
    s19.verdict = Verdict::Measured;
    s19.metrics["events"] = static_cast<double>(log.events().size());
    for (codec::FormatId f : codec::kAllFormats) {
      const auto bytes = codec::write_bytes(f, log).bytes.size();
      s19.metrics[std::string("bytes/") + codec::short_name(f)] = static_cast<double>(bytes);
      s19.metrics[std::string("bytes_per_event/") + codec::short_name(f)] =
          log.events().empty() ? 0.0
                               : static_cast<double>(bytes) / static_cast<double>(log.events().size());
    }
  }

  return report;
}

}  // namespace oclog
