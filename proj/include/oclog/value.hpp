#pragma once
// Attribute values: a structural tagged union covering the value space of
// every supported log format (scalars, timestamps, lists, string-keyed maps).

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "oclog/time.hpp"

namespace oclog {

enum class ValueKind { Null, Boolean, Integer, Real, Text, Time, List, Map };

inline const char* to_string(ValueKind k) {
  switch (k) {
    case ValueKind::Null: return "null";
    case ValueKind::Boolean: return "boolean";
    case ValueKind::Integer: return "integer";
    case ValueKind::Real: return "float";
    case ValueKind::Text: return "string";
    case ValueKind::Time: return "time";
    case ValueKind::List: return "list";
    case ValueKind::Map: return "map";
  }
  return "null";
}

inline std::optional<ValueKind> value_kind_from_string(std::string_view s) {
  if (s == "null") return ValueKind::Null;
  if (s == "boolean" || s == "bool") return ValueKind::Boolean;
  if (s == "integer" || s == "int") return ValueKind::Integer;
  if (s == "float" || s == "double" || s == "real") return ValueKind::Real;
  if (s == "string" || s == "text") return ValueKind::Text;
  if (s == "time" || s == "date" || s == "timestamp") return ValueKind::Time;
  if (s == "list") return ValueKind::List;
  if (s == "map" || s == "object") return ValueKind::Map;
  return std::nullopt;
}

class AttributeValue {
 public:
  using List = std::vector<AttributeValue>;
  using Map = std::map<std::string, AttributeValue>;

  // Nesting bound; guards pathological inputs in codecs and builders.
  static constexpr int kMaxDepth = 32;

  AttributeValue() = default;  // null
  AttributeValue(bool b) : v_(b) {}
  AttributeValue(std::int64_t i) : v_(i) {}
  AttributeValue(int i) : v_(static_cast<std::int64_t>(i)) {}
  AttributeValue(double d) : v_(d) {}
  AttributeValue(std::string s) : v_(std::move(s)) {}
  AttributeValue(const char* s) : v_(std::string(s)) {}
  AttributeValue(Timestamp t) : v_(t) {}
  AttributeValue(List l) : v_(std::move(l)) {}
  AttributeValue(Map m) : v_(std::move(m)) {}

  ValueKind kind() const { return static_cast<ValueKind>(v_.index()); }
  bool is_null() const { return kind() == ValueKind::Null; }

  bool as_bool() const { return std::get<bool>(v_); }
  std::int64_t as_int() const { return std::get<std::int64_t>(v_); }
  double as_real() const { return std::get<double>(v_); }
  const std::string& as_text() const { return std::get<std::string>(v_); }
  Timestamp as_time() const { return std::get<Timestamp>(v_); }
  const List& as_list() const { return std::get<List>(v_); }
  const Map& as_map() const { return std::get<Map>(v_); }

  bool operator==(const AttributeValue& other) const = default;

  // Total order (kind first, then value) for use in ordered containers.
  // Hand-rolled: the recursive alternatives rule out a defaulted <=>.
  int compare(const AttributeValue& other) const {
    if (kind() != other.kind())
      return static_cast<int>(kind()) < static_cast<int>(other.kind()) ? -1 : 1;
    auto cmp = [](auto a, auto b) { return a < b ? -1 : (b < a ? 1 : 0); };
    switch (kind()) {
      case ValueKind::Null: return 0;
      case ValueKind::Boolean: return cmp(as_bool(), other.as_bool());
      case ValueKind::Integer: return cmp(as_int(), other.as_int());
      case ValueKind::Real: return cmp(as_real(), other.as_real());
      case ValueKind::Text: return as_text().compare(other.as_text());
      case ValueKind::Time: return cmp(as_time().millis(), other.as_time().millis());
      case ValueKind::List: {
        const auto& a = as_list();
        const auto& b = other.as_list();
        for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i)
          if (int c = a[i].compare(b[i]); c != 0) return c;
        return cmp(a.size(), b.size());
      }
      case ValueKind::Map: {
        auto ai = as_map().begin(), ae = as_map().end();
        auto bi = other.as_map().begin(), be = other.as_map().end();
        for (; ai != ae && bi != be; ++ai, ++bi) {
          if (int c = ai->first.compare(bi->first); c != 0) return c;
          if (int c = ai->second.compare(bi->second); c != 0) return c;
        }
        return cmp(as_map().size(), other.as_map().size());
      }
    }
    return 0;
  }

  bool operator<(const AttributeValue& other) const { return compare(other) < 0; }

  int depth() const {
    switch (kind()) {
      case ValueKind::List: {
        int d = 0;
        for (const auto& e : as_list()) d = std::max(d, e.depth());
        return d + 1;
      }
      case ValueKind::Map: {
        int d = 0;
        for (const auto& [k, e] : as_map()) d = std::max(d, e.depth());
        return d + 1;
      }
      default:
        return 1;
    }
  }

 private:
  // Variant index order must match ValueKind.
  std::variant<std::monostate, bool, std::int64_t, double, std::string, Timestamp, List, Map> v_;
};

}  // namespace oclog
