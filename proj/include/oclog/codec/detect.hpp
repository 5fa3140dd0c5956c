#pragma once
// Format detection by structural signature: top-level keys for the JSON
// dialects, zip magic or a manifest for table bundles.

#include <string>

#include "oclog/codec/common.hpp"
#include "oclog/codec/zipfile.hpp"

namespace oclog::codec {

inline FormatId detect_format(const std::string& bytes) {
  if (bytes.empty())
    throw CodecError(CodecError::What::UnrecognizedFormat, "/", "empty input");
  if (looks_like_zip(bytes)) return FormatId::DocelTables;

  Json doc = Json::parse(bytes, nullptr, false);
  if (doc.is_discarded() || !doc.is_object())
    throw CodecError(CodecError::What::UnrecognizedFormat, "/", "no structural signature matched");

  if (doc.contains("rocel:version")) return FormatId::RocelJson;
  if (doc.contains("objectTypes") && doc.contains("eventTypes") && doc.contains("objects") &&
      doc.contains("events"))
    return FormatId::Ocel2Json;
  if (doc.contains("ocel:events") && doc.contains("ocel:objects")) return FormatId::Ocel1Json;
  if (doc.contains("format") && doc["format"] == Json("docel")) return FormatId::DocelTables;

  throw CodecError(CodecError::What::UnrecognizedFormat, "/", "no structural signature matched");
}

}  // namespace oclog::codec
