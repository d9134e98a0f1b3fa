#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace mhd {

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view text);
/// 16 lowercase hex digits.
std::string hex_digest(std::uint64_t value);
/// Shortest round-trip decimal form of a double.
std::string format_double(double value);

}  // namespace mhd
