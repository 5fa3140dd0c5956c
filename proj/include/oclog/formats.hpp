#pragma once
// One include for all codecs plus byte-level dispatch by format id.

#include <string>

#include "oclog/codec/common.hpp"
#include "oclog/codec/detect.hpp"
#include "oclog/codec/docel.hpp"
#include "oclog/codec/ocel1.hpp"
#include "oclog/codec/ocel2.hpp"

namespace oclog::codec {

inline DecodeResult read_bytes(FormatId format, const std::string& bytes, ReadOptions opts = {}) {
  switch (format) {
    case FormatId::Ocel1Json: return read_ocel1(bytes, opts);
    case FormatId::Ocel2Json: return read_ocel2(bytes, opts);
    case FormatId::DocelTables: return read_docel_bytes(bytes, opts);
    case FormatId::RocelJson: return {read_rocel(bytes, opts), {}};
  }
  throw CodecError(CodecError::What::UnrecognizedFormat, "/", "unhandled format");
}

inline EncodeResult write_bytes(FormatId format, const OCLog& log) {
  switch (format) {
    case FormatId::Ocel1Json: return write_ocel1(log);
    case FormatId::Ocel2Json: return write_ocel2(log);
    case FormatId::DocelTables: return write_docel_bytes(log);
    case FormatId::RocelJson: return {write_rocel(log), {}};
  }
  throw CodecError(CodecError::What::UnrecognizedFormat, "/", "unhandled format");
}

// Instance-independent capabilities of the four concrete codecs, used for
// static loss previews. These differ from the published-format matrix where
// our dialects differ from the papers' idealizations: OCEL 2.0 changes are
// unambiguous only while no two events share an instant (qualified), and a
// DOCEL change requires a causing event.
inline FormatDescriptor codec_capabilities(FormatId format) {
  FormatDescriptor d;
  d.format = to_string(format);
  auto yes = Support::yes();
  auto no = Support::no();
  for (SpecId s : kAllSpecs) d.support[s] = yes;

  switch (format) {
    case FormatId::Ocel1Json:
      d.support[SpecId::S8] = no;
      d.support[SpecId::S9] = no;
      d.support[SpecId::S10] = no;
      d.support[SpecId::S11] = no;
      d.support[SpecId::S12] = no;
      d.support[SpecId::S16] = no;
      d.support[SpecId::S17] = no;
      break;
    case FormatId::Ocel2Json:
      d.support[SpecId::S11] = no;
      d.support[SpecId::S12] = no;
      d.support[SpecId::S13] = no;
      d.support[SpecId::S14] = no;
      d.support[SpecId::S16] = Support::qualified("only while timestamps are unique");
      d.support[SpecId::S17] = Support::qualified("changes identified by instant");
      break;
    case FormatId::DocelTables:
      d.support[SpecId::S8] = Support::qualified("requires a causing event");
      d.support[SpecId::S9] = no;
      d.support[SpecId::S10] = no;
      d.support[SpecId::S11] = no;
      d.support[SpecId::S12] = no;
      break;
    case FormatId::RocelJson:
      d.support[SpecId::S13] = no;
      d.support[SpecId::S14] = no;
      break;
  }
  return d;
}

}  // namespace oclog::codec
