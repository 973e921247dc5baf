#include "lobarena/util/time.hpp"

#include <cstdio>

#include "lobarena/util/error.hpp"

namespace lobarena {

SimTime parse_clock(const std::string& hhmm) {
  unsigned h = 0, m = 0, s = 0;
  int n = std::sscanf(hhmm.c_str(), "%u:%u:%u", &h, &m, &s);
  if (n < 2 || h > 23 || m > 59 || s > 59) {
    throw Error("invalid clock time '" + hhmm + "', expected HH:MM or HH:MM:SS");
  }
  return (h * 3600ull + m * 60ull + s) * kNsPerSec;
}

std::string format_clock(SimTime t) {
  SimTime of_day = t % kNsPerDay;
  unsigned h = static_cast<unsigned>(of_day / kNsPerHour);
  unsigned m = static_cast<unsigned>((of_day / kNsPerMin) % 60);
  unsigned s = static_cast<unsigned>((of_day / kNsPerSec) % 60);
  unsigned long long ns = of_day % kNsPerSec;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%02u:%02u:%02u.%09llu", h, m, s, ns);
  return buf;
}

}  // namespace lobarena
