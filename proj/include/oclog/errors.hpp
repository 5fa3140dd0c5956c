#pragma once
// Error taxonomy. Construction problems are reported as value-typed
// BuildError lists (a log is either fully valid or not built at all);
// precondition and codec failures throw.

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace oclog {

struct BuildError {
  enum class Code { DuplicateId, DanglingReference, TypeCycle, SchemaMismatch };

  Code code;
  // DuplicateId: kind ("event", "object", ...), subject = the id.
  // DanglingReference: subject = referrer, detail names the missing target.
  // TypeCycle: cycle holds the path, e.g. {A, B, A}.
  // SchemaMismatch: subject = offending object/type id, detail = attribute + reason.
  std::string kind;
  std::string subject;
  std::string detail;
  std::vector<std::string> cycle;

  std::string to_string() const {
    switch (code) {
      case Code::DuplicateId:
        return "duplicate " + kind + " id '" + subject + "'";
      case Code::DanglingReference:
        return "dangling reference from " + subject + " to " + detail;
      case Code::TypeCycle: {
        std::string s = "object type cycle: ";
        for (std::size_t i = 0; i < cycle.size(); ++i) {
          if (i) s += " -> ";
          s += cycle[i];
        }
        return s;
      }
      case Code::SchemaMismatch:
        return "schema mismatch on " + subject + ": " + detail;
    }
    return {};
  }
};

// Thrown by operations whose preconditions name entities that must exist.
class LookupError : public std::runtime_error {
 public:
  enum class What {
    UnknownObject,
    UnknownAttribute,
    UnknownType,
    UnknownQualifier,
    UnknownFormatName,
    InvalidConfig,
  };

  LookupError(What w, std::string name)
      : std::runtime_error(describe(w, name)), what_(w), name_(std::move(name)) {}

  What code() const { return what_; }
  const std::string& name() const { return name_; }

 private:
  static std::string describe(What w, const std::string& name) {
    switch (w) {
      case What::UnknownObject: return "unknown object '" + name + "'";
      case What::UnknownAttribute: return "unknown attribute '" + name + "'";
      case What::UnknownType: return "unknown type '" + name + "'";
      case What::UnknownQualifier: return "unknown qualifier '" + name + "'";
      case What::UnknownFormatName: return "unknown format '" + name + "'";
      case What::InvalidConfig: return "invalid config: " + name;
    }
    return name;
  }

  What what_;
  std::string name_;
};

// Thrown by codecs on inputs they cannot decode.
class CodecError : public std::runtime_error {
 public:
  enum class What {
    UnrecognizedFormat,
    MalformedDocument,
    MalformedTable,
    ForeignKeyViolation,
    DanglingReference,
    NonChronologicalChange,
  };

  CodecError(What w, std::string location, const std::string& message)
      : std::runtime_error(tag(w) + std::string(" at ") + location + ": " + message),
        what_(w),
        location_(std::move(location)) {}

  What code() const { return what_; }
  const std::string& location() const { return location_; }

 private:
  static const char* tag(What w) {
    switch (w) {
      case What::UnrecognizedFormat: return "unrecognized format";
      case What::MalformedDocument: return "malformed document";
      case What::MalformedTable: return "malformed table";
      case What::ForeignKeyViolation: return "foreign key violation";
      case What::DanglingReference: return "dangling reference";
      case What::NonChronologicalChange: return "non-chronological change";
    }
    return "codec error";
  }

  What what_;
  std::string location_;
};

}  // namespace oclog
