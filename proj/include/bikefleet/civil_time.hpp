#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace bikefleet {

/// Seconds since 1970-01-01 00:00:00 in local civil time. No zone arithmetic is
/// ever applied; a dataset is assumed to come from a single city.
using Timestamp = std::int64_t;

inline constexpr Timestamp kSecondsPerDay = 86400;

class CivilDate {
 public:
  constexpr CivilDate() = default;
  constexpr explicit CivilDate(std::int32_t days_since_epoch) : days_(days_since_epoch) {}

  static CivilDate from_ymd(int year, unsigned month, unsigned day);

  constexpr std::int32_t days_since_epoch() const { return days_; }
  constexpr Timestamp midnight() const { return Timestamp{days_} * kSecondsPerDay; }
  constexpr CivilDate plus_days(std::int32_t n) const { return CivilDate(days_ + n); }

  /// 0 = Monday ... 6 = Sunday.
  int weekday() const;

  /// YYYY-MM-DD
  std::string to_string() const;

  constexpr auto operator<=>(const CivilDate&) const = default;

 private:
  std::int32_t days_ = 0;
};

CivilDate date_of(Timestamp t);

/// Parses "YYYY-MM-DD HH:MM:SS". Returns nullopt for anything else.
std::optional<Timestamp> parse_timestamp(std::string_view text);

/// Parses "YYYY-MM-DD".
std::optional<CivilDate> parse_date(std::string_view text);

std::string format_timestamp(Timestamp t);

}  // namespace bikefleet
