#include "twelect/timeutil.hpp"

#include <charconv>
#include <cstdio>

namespace twelect {
namespace {

bool parse_int(std::string_view s, size_t pos, size_t len, int& out) {
  if (pos + len > s.size()) return false;
  const auto* first = s.data() + pos;
  const auto [ptr, ec] = std::from_chars(first, first + len, out);
  return ec == std::errc() && ptr == first + len;
}

}  // namespace

// Howard Hinnant's civil-days algorithm.
int64_t days_from_civil(int y, unsigned m, unsigned d) {
  y -= m <= 2;
  const int64_t era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<int64_t>(doe) - 719468;
}

void civil_from_days(int64_t z, int& year, unsigned& month, unsigned& day) {
  z += 719468;
  const int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const auto doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const int64_t y = static_cast<int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  day = doy - (153 * mp + 2) / 5 + 1;
  month = mp + (mp < 10 ? 3 : -9);
  year = static_cast<int>(y + (month <= 2));
}

std::optional<int64_t> parse_iso8601(std::string_view s) {
  int year = 0, month = 0, day = 0;
  if (!parse_int(s, 0, 4, year) || s.size() < 10 || s[4] != '-' || s[7] != '-' ||
      !parse_int(s, 5, 2, month) || !parse_int(s, 8, 2, day)) {
    return std::nullopt;
  }
  if (month < 1 || month > 12 || day < 1) return std::nullopt;
  static constexpr int kMonthDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  const bool leap = year % 4 == 0 && (year % 100 != 0 || year % 400 == 0);
  if (day > kMonthDays[month - 1] + (month == 2 && leap ? 1 : 0)) return std::nullopt;

  int hour = 0, minute = 0, second = 0;
  size_t pos = 10;
  if (pos < s.size() && (s[pos] == 'T' || s[pos] == 't' || s[pos] == ' ')) {
    ++pos;
    if (!parse_int(s, pos, 2, hour) || pos + 8 > s.size() || s[pos + 2] != ':' ||
        s[pos + 5] != ':' || !parse_int(s, pos + 3, 2, minute) ||
        !parse_int(s, pos + 6, 2, second)) {
      return std::nullopt;
    }
    if (hour > 23 || minute > 59 || second > 60) return std::nullopt;
    pos += 8;
    if (pos < s.size() && s[pos] == '.') {  // fractional seconds: truncate
      ++pos;
      if (pos >= s.size() || s[pos] < '0' || s[pos] > '9') return std::nullopt;
      while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
    }
  } else if (pos != s.size()) {
    return std::nullopt;
  }

  int64_t offset = 0;
  if (pos < s.size()) {
    const char c = s[pos];
    if (c == 'Z' || c == 'z') {
      ++pos;
    } else if (c == '+' || c == '-') {
      int oh = 0, om = 0;
      size_t after;
      if (parse_int(s, pos + 1, 2, oh) && pos + 6 <= s.size() && s[pos + 3] == ':' &&
          parse_int(s, pos + 4, 2, om)) {
        after = pos + 6;
      } else if (parse_int(s, pos + 1, 2, oh) && parse_int(s, pos + 3, 2, om) &&
                 pos + 5 <= s.size()) {
        after = pos + 5;
      } else if (parse_int(s, pos + 1, 2, oh) && pos + 3 <= s.size()) {
        om = 0;
        after = pos + 3;
      } else {
        return std::nullopt;
      }
      if (oh > 23 || om > 59) return std::nullopt;
      offset = (c == '+' ? 1 : -1) * (oh * 3600LL + om * 60LL);
      pos = after;
    } else {
      return std::nullopt;
    }
  }
  if (pos != s.size()) return std::nullopt;

  const int64_t days = days_from_civil(year, static_cast<unsigned>(month),
                                       static_cast<unsigned>(day));
  return days * 86400 + hour * 3600LL + minute * 60LL + second - offset;
}

std::string format_iso8601_utc(int64_t t) {
  int64_t days = t / 86400;
  int64_t rem = t % 86400;
  if (rem < 0) {
    rem += 86400;
    --days;
  }
  int year;
  unsigned month, day;
  civil_from_days(days, year, month, day);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld:%02lldZ", year, month, day,
                static_cast<long long>(rem / 3600), static_cast<long long>((rem / 60) % 60),
                static_cast<long long>(rem % 60));
  return buf;
}

MonthKey month_of(int64_t t) {
  const int64_t shifted = t - kMonthBoundaryUtcOffset;
  int64_t days = shifted / 86400;
  if (shifted % 86400 < 0) --days;
  int year;
  unsigned month, day;
  civil_from_days(days, year, month, day);
  return MonthKey{year, static_cast<int>(month)};
}

std::string to_string(MonthKey m) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d", m.year, m.month);
  return buf;
}

std::optional<MonthKey> parse_month(std::string_view s) {
  int year = 0, month = 0;
  if (s.size() != 7 || s[4] != '-' || !parse_int(s, 0, 4, year) || !parse_int(s, 5, 2, month) ||
      month < 1 || month > 12) {
    return std::nullopt;
  }
  return MonthKey{year, month};
}

}  // namespace twelect
