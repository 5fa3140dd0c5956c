#pragma once
// UTC calendar instants with millisecond precision.
//
// Stored as milliseconds since the Unix epoch. Parsing accepts ISO-8601
// with an explicit offset (Z, +HH:MM, -HH:MM, +HHMM); rendering always
// normalizes to a canonical "YYYY-MM-DDTHH:MM:SS.mmmZ" form so that
// value -> string -> value is the identity.

#include <cstdint>
#include <cstdio>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace oclog {

class Timestamp {
 public:
  constexpr Timestamp() = default;

  static constexpr Timestamp from_millis(std::int64_t ms) {
    Timestamp t;
    t.ms_ = ms;
    return t;
  }

  constexpr std::int64_t millis() const { return ms_; }

  auto operator<=>(const Timestamp&) const = default;

  // Parses an ISO-8601 instant with explicit offset. Returns nullopt on
  // malformed input or a date outside years 0000..9999.
  static std::optional<Timestamp> parse(std::string_view s);

  std::string to_iso() const;

 private:
  std::int64_t ms_ = 0;

  // Days since 1970-01-01 from a civil date (proleptic Gregorian).
  static constexpr std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const auto yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3u : 9u)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
  }

  struct Civil {
    std::int64_t year;
    unsigned month;
    unsigned day;
  };

  static constexpr Civil civil_from_days(std::int64_t z) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const auto doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp < 10 ? mp + 3 : mp - 9;
    return {y + (m <= 2), m, d};
  }

  static constexpr bool is_leap(std::int64_t y) {
    return y % 4 == 0 && (y % 100 != 0 || y % 400 == 0);
  }

  static constexpr unsigned days_in_month(std::int64_t y, unsigned m) {
    constexpr unsigned kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap(y)) return 29;
    return kDays[m - 1];
  }
};

inline std::optional<Timestamp> Timestamp::parse(std::string_view s) {
  // Minimal hand-rolled scanner; std::get_time is locale-dependent and
  // does not handle fractional seconds or offsets portably.
  const auto digits = [&](std::size_t pos, std::size_t n, std::int64_t& out) {
    if (pos + n > s.size()) return false;
    std::int64_t v = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const char c = s[pos + i];
      if (c < '0' || c > '9') return false;
      v = v * 10 + (c - '0');
    }
    out = v;
    return true;
  };

  std::int64_t year, month, day, hour, minute, second;
  if (!digits(0, 4, year) || s.size() < 5 || s[4] != '-') return std::nullopt;
  if (!digits(5, 2, month) || s.size() < 8 || s[7] != '-') return std::nullopt;
  if (!digits(8, 2, day) || s.size() < 11 || (s[10] != 'T' && s[10] != 't' && s[10] != ' '))
    return std::nullopt;
  if (!digits(11, 2, hour) || s.size() < 14 || s[13] != ':') return std::nullopt;
  if (!digits(14, 2, minute) || s.size() < 17 || s[16] != ':') return std::nullopt;
  if (!digits(17, 2, second)) return std::nullopt;

  std::size_t pos = 19;
  std::int64_t millis = 0;
  if (pos < s.size() && (s[pos] == '.' || s[pos] == ',')) {
    ++pos;
    std::size_t ndigits = 0;
    std::int64_t frac = 0;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
      if (ndigits < 3) frac = frac * 10 + (s[pos] - '0');
      ++ndigits;
      ++pos;
    }
    if (ndigits == 0 || ndigits > 9) return std::nullopt;
    while (ndigits < 3) {
      frac *= 10;
      ++ndigits;
    }
    millis = frac;
  }

  // Offset is mandatory: an instant without one is ambiguous.
  if (pos >= s.size()) return std::nullopt;
  std::int64_t offset_min = 0;
  if (s[pos] == 'Z' || s[pos] == 'z') {
    ++pos;
  } else if (s[pos] == '+' || s[pos] == '-') {
    const int sign = s[pos] == '+' ? 1 : -1;
    ++pos;
    std::int64_t oh = 0, om = 0;
    if (!digits(pos, 2, oh)) return std::nullopt;
    pos += 2;
    if (pos < s.size() && s[pos] == ':') ++pos;
    if (pos + 2 <= s.size() && s[pos] >= '0' && s[pos] <= '9') {
      if (!digits(pos, 2, om)) return std::nullopt;
      pos += 2;
    }
    if (oh > 18 || om > 59) return std::nullopt;
    offset_min = sign * (oh * 60 + om);
  } else {
    return std::nullopt;
  }
  if (pos != s.size()) return std::nullopt;

  if (month < 1 || month > 12 || day < 1 ||
      day > days_in_month(year, static_cast<unsigned>(month)))
    return std::nullopt;
  if (hour > 23 || minute > 59 || second > 60) return std::nullopt;
  if (second == 60) second = 59;  // leap seconds clamp

  const std::int64_t days =
      days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day));
  std::int64_t total = ((days * 24 + hour) * 60 + minute) * 60 + second;
  total -= offset_min * 60;
  return Timestamp::from_millis(total * 1000 + millis);
}

inline std::string Timestamp::to_iso() const {
  std::int64_t ms = ms_ % 1000;
  std::int64_t secs = ms_ / 1000;
  if (ms < 0) {
    ms += 1000;
    secs -= 1;
  }
  std::int64_t days = secs / 86400;
  std::int64_t sod = secs % 86400;
  if (sod < 0) {
    sod += 86400;
    days -= 1;
  }
  const Civil c = civil_from_days(days);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02lld:%02lld:%02lld.%03lldZ",
                static_cast<long long>(c.year), c.month, c.day,
                static_cast<long long>(sod / 3600), static_cast<long long>(sod / 60 % 60),
                static_cast<long long>(sod % 60), static_cast<long long>(ms));
  return buf;
}

}  // namespace oclog
