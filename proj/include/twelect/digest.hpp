#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace twelect {

// FNV-1a 64-bit. Used for run-manifest input digests and determinism checks
// (equality of byte streams), not for security.
inline uint64_t fnv1a64(std::string_view bytes, uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string digest_hex(uint64_t digest);

// Digest of a file's contents. Throws InputError if unreadable.
uint64_t digest_file(const std::string& path);

}  // namespace twelect
