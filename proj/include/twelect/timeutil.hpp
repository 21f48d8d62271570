#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace twelect {

// Month boundaries sit at 05:00:00 UTC, midnight in Mexico City; the whole
// retrieval window convention is expressed in that clock.
inline constexpr int64_t kMonthBoundaryUtcOffset = 5 * 3600;

// Default analysis window: 2020-12-01T05:00:00Z to 2021-05-31T05:00:00Z
// (half-open).
inline constexpr int64_t kDefaultWindowStart = 1606798800;
inline constexpr int64_t kDefaultWindowEnd = 1622437200;

// Accepts YYYY-MM-DD[Tt ]HH:MM:SS[.fraction][Z|+HH:MM|-HH:MM|+HHMM] and plain
// dates (midnight UTC). Returns epoch seconds UTC; fractional seconds are
// truncated.
std::optional<int64_t> parse_iso8601(std::string_view s);

// "YYYY-MM-DDTHH:MM:SSZ"
std::string format_iso8601_utc(int64_t epoch_seconds);

// Days since 1970-01-01 for a proleptic Gregorian civil date.
int64_t days_from_civil(int year, unsigned month, unsigned day);
void civil_from_days(int64_t days, int& year, unsigned& month, unsigned& day);

struct MonthKey {
  int year = 0;
  int month = 0;  // 1..12

  auto operator<=>(const MonthKey&) const = default;
};

// Calendar month of the Mexico-City-midnight clock: the month boundary for
// month M is the instant M-01T05:00:00Z.
MonthKey month_of(int64_t epoch_seconds);

std::string to_string(MonthKey m);                       // "2021-05"
std::optional<MonthKey> parse_month(std::string_view s); // "2021-05"

}  // namespace twelect
