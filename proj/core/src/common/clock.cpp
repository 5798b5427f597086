#include "counselforge/common/clock.hpp"

#include <cstdio>
#include <ctime>

namespace counselforge {

WallClock system_wall_clock() {
  return [] { return std::chrono::system_clock::now(); };
}

MonotonicClock system_monotonic_clock() {
  return [] { return std::chrono::steady_clock::now(); };
}

WallClock frozen_wall_clock(std::chrono::system_clock::time_point at) {
  return [at] { return at; };
}

MonotonicClock frozen_monotonic_clock() {
  return [] { return std::chrono::steady_clock::time_point{}; };
}

std::string format_iso8601(std::chrono::system_clock::time_point tp) {
  std::time_t t = std::chrono::system_clock::to_time_t(tp);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::optional<std::chrono::system_clock::time_point> parse_iso8601(
    std::string_view text) {
  std::tm tm{};
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
  char z = 0;
  std::string buf(text);
  if (std::sscanf(buf.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%c", &y, &mo, &d, &h,
                  &mi, &s, &z) != 7 ||
      z != 'Z') {
    return std::nullopt;
  }
  tm.tm_year = y - 1900;
  tm.tm_mon = mo - 1;
  tm.tm_mday = d;
  tm.tm_hour = h;
  tm.tm_min = mi;
  tm.tm_sec = s;
  std::time_t t = timegm(&tm);
  if (t == static_cast<std::time_t>(-1)) return std::nullopt;
  return std::chrono::system_clock::from_time_t(t);
}

}  // namespace counselforge
