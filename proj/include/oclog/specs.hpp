#pragma once
// The 19-point specification framework: ids, dimensions, sentences, and
// the static capability matrix for the seven published formats.

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "oclog/errors.hpp"

namespace oclog {

enum class SpecId {
  S1, S2, S3, S4,                    // E2E
  S5, S6, S7, S8, S9, S10, S11, S12, // O2O
  S13, S14, S15,                     // E2O
  S16, S17, S18, S19,                // Data Quality
};

inline constexpr std::array<SpecId, 19> kAllSpecs = {
    SpecId::S1,  SpecId::S2,  SpecId::S3,  SpecId::S4,  SpecId::S5,  SpecId::S6,  SpecId::S7,
    SpecId::S8,  SpecId::S9,  SpecId::S10, SpecId::S11, SpecId::S12, SpecId::S13, SpecId::S14,
    SpecId::S15, SpecId::S16, SpecId::S17, SpecId::S18, SpecId::S19};

enum class Dimension { E2E, O2O, E2O, DataQuality };

inline constexpr Dimension dimension_of(SpecId s) {
  const int n = static_cast<int>(s);
  if (n <= static_cast<int>(SpecId::S4)) return Dimension::E2E;
  if (n <= static_cast<int>(SpecId::S12)) return Dimension::O2O;
  if (n <= static_cast<int>(SpecId::S15)) return Dimension::E2O;
  return Dimension::DataQuality;
}

inline const char* to_string(Dimension d) {
  switch (d) {
    case Dimension::E2E: return "E2E";
    case Dimension::O2O: return "O2O";
    case Dimension::E2O: return "E2O";
    case Dimension::DataQuality: return "Data Quality";
  }
  return "";
}

inline const char* to_string(SpecId s) {
  constexpr const char* kNames[] = {"S1",  "S2",  "S3",  "S4",  "S5",  "S6",  "S7",
                                    "S8",  "S9",  "S10", "S11", "S12", "S13", "S14",
                                    "S15", "S16", "S17", "S18", "S19"};
  return kNames[static_cast<int>(s)];
}

inline std::optional<SpecId> spec_from_string(std::string_view s) {
  for (SpecId id : kAllSpecs)
    if (s == to_string(id)) return id;
  return std::nullopt;
}

inline const char* sentence_of(SpecId s) {
  switch (s) {
    case SpecId::S1: return "An event must have a unique event ID";
    case SpecId::S2: return "An event must have a timestamp";
    case SpecId::S3: return "An event must have an activity";
    case SpecId::S4: return "An event can have other optional attributes";
    case SpecId::S5: return "An object must have an object type";
    case SpecId::S6: return "An object must have a unique object ID";
    case SpecId::S7: return "An object can have optional object attributes";
    case SpecId::S8: return "Object attributes can change values and those changes are traceable";
    case SpecId::S9: return "An object instance can be related to other object instances";
    case SpecId::S10: return "Supports relation qualifiers";
    case SpecId::S11: return "Object relations can change over time (schema evolution)";
    case SpecId::S12: return "Supports object type inheritance";
    case SpecId::S13: return "An event must be related to 1..N objects";
    case SpecId::S14: return "An object must be related to 1..N events";
    case SpecId::S15: return "The process of an individual object instance must be recoverable";
    case SpecId::S16: return "Data changes must be unambiguous";
    case SpecId::S17: return "Data is uniquely identifiable";
    case SpecId::S18: return "Data should be minimally duplicated";
    case SpecId::S19: return "Data storage should be maximally scalable";
  }
  return "";
}

// Per-format support for one specification.
struct Support {
  enum class Level { Yes, No, Qualified };

  Level level = Level::No;
  std::string note;  // set for Qualified cells

  bool operator==(const Support&) const = default;

  static Support yes() { return {Level::Yes, {}}; }
  static Support no() { return {Level::No, {}}; }
  static Support qualified(std::string note) { return {Level::Qualified, std::move(note)}; }

  // Ordering used by loss previews: Yes > Qualified > No.
  int rank() const {
    switch (level) {
      case Level::Yes: return 2;
      case Level::Qualified: return 1;
      case Level::No: return 0;
    }
    return 0;
  }

  // Rendering mirrors the published comparison: check mark, X, X with a
  // clarifying note, or "/" for not-applicable cells.
  std::string cell() const {
    switch (level) {
      case Level::Yes: return "✓";
      case Level::No: return "X";
      case Level::Qualified:
        return note == kNotApplicableNote ? "/" : "X (" + note + ")";
    }
    return "";
  }

  static constexpr const char* kNotApplicableNote = "not applicable - metamodel";
};

struct FormatDescriptor {
  std::string format;
  std::map<SpecId, Support> support;

  const Support& operator[](SpecId s) const { return support.at(s); }
};

inline const std::array<std::string, 7>& published_format_names() {
  static const std::array<std::string, 7> kNames = {"XOC",  "OCEL 1.0", "OCEL 2.0", "DOCEL",
                                                    "ACEL", "EKG",      "OCED"};
  return kNames;
}

// Capability matrix for the seven published formats.
inline FormatDescriptor format_capabilities(const std::string& name) {
  // Column order: XOC, OCEL 1.0, OCEL 2.0, DOCEL, ACEL, EKG, OCED.
  // Row encoding: Y = yes, N = no, T = no-but-qualified "not traceable",
  // A = not applicable (metamodel).
  static const std::map<SpecId, const char*> kRows = {
      {SpecId::S1, "YYYYYYY"},  {SpecId::S2, "YYYYYYY"},  {SpecId::S3, "YYYYYYY"},
      {SpecId::S4, "YYYYYYY"},  {SpecId::S5, "YYYYYYY"},  {SpecId::S6, "YYYYYYY"},
      {SpecId::S7, "YYYYYYY"},  {SpecId::S8, "TTYYYYY"},  {SpecId::S9, "YNYNYYY"},
      {SpecId::S10, "NNYNNNY"}, {SpecId::S11, "NNNNYNN"}, {SpecId::S12, "NNNNNNN"},
      {SpecId::S13, "NYNYNNN"}, {SpecId::S14, "NYNYNNN"}, {SpecId::S15, "YYYYYYY"},
      {SpecId::S16, "YNNYYYA"}, {SpecId::S17, "YNNYYYA"}, {SpecId::S18, "NYYYYYA"},
      {SpecId::S19, "NYYYYYA"}};

  const auto& names = published_format_names();
  std::size_t col = names.size();
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) col = i;
  if (col == names.size()) throw LookupError(LookupError::What::UnknownFormatName, name);

  FormatDescriptor d;
  d.format = name;
  for (SpecId s : kAllSpecs) {
    switch (kRows.at(s)[col]) {
      case 'Y': d.support[s] = Support::yes(); break;
      case 'N': d.support[s] = Support::no(); break;
      case 'T': d.support[s] = Support::qualified("not traceable"); break;
      case 'A': d.support[s] = Support::qualified(Support::kNotApplicableNote); break;
    }
  }
  return d;
}

}  // namespace oclog
