#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace lobarena {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ull;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ull;

inline std::uint64_t fnv1a64(std::uint64_t h, const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= kFnvPrime;
  }
  return h;
}

inline std::uint64_t fnv1a64(std::uint64_t h, std::uint64_t v) {
  return fnv1a64(h, &v, sizeof v);
}

inline std::uint64_t fnv1a64(std::uint64_t h, std::string_view s) {
  return fnv1a64(h, s.data(), s.size());
}

/// SHA-256 of a file's contents as lowercase hex; used for manifests.
std::string sha256_file_hex(const std::string& path);

/// SHA-256 of a byte string as lowercase hex.
std::string sha256_hex(std::string_view data);

}  // namespace lobarena
