#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

namespace zonerec {

// FNV-1a, 64-bit. Used to fingerprint artifacts (vocabulary, corpus), not
// for security.
inline std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

inline std::string fingerprint(std::string_view data) { return hex64(fnv1a64(data)); }

}  // namespace zonerec
