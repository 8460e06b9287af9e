#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace trepan {

/// 64-bit FNV-1a; used for fingerprints and provenance, not for security.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t v);
inline std::string digest(std::string_view bytes) { return hex64(fnv1a64(bytes)); }

}  // namespace trepan
