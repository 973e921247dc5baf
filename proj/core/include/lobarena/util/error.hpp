#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace lobarena {

namespace detail {
inline void concat_into(std::ostringstream&) {}
template <typename T, typename... Rest>
void concat_into(std::ostringstream& os, const T& v, const Rest&... rest) {
  os << v;
  concat_into(os, rest...);
}
}  // namespace detail

template <typename... Args>
std::string concat(const Args&... args) {
  std::ostringstream os;
  detail::concat_into(os, args...);
  return os.str();
}

/// Base error for all failures raised by this library. The message is a single
/// line suitable for the CLI's machine-parsable `error: <what>` output.
/// Multiple arguments are streamed together: Error("bad row ", 7).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;

  template <typename T1, typename T2, typename... Rest>
  Error(const T1& a, const T2& b, const Rest&... rest)
      : std::runtime_error(concat(a, b, rest...)) {}
};

/// Invalid configuration or input file contents; the message names the
/// offending field or row.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace lobarena
