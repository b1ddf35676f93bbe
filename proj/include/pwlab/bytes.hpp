#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace pwlab {

using Bytes = std::vector<uint8_t>;

/// 256-bit digest, the fixed output width of hash_H.
using Digest = std::array<uint8_t, 32>;

constexpr size_t kDigestLen = 32;

std::string to_hex(const uint8_t* data, size_t len);
std::string to_hex(const Bytes& b);
std::string to_hex(const Digest& d);

/// Parses lowercase/uppercase hex; throws Error(ConfigError) on odd length
/// or non-hex characters.
Bytes from_hex(std::string_view hex);

Bytes xor_bytes(const Bytes& a, const Bytes& b);

Bytes digest_to_bytes(const Digest& d);

/// Throws Error(ConfigError) unless b is exactly 32 bytes.
Digest digest_from_bytes(const Bytes& b);

} // namespace pwlab
