#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace sleuth {

inline constexpr std::size_t kDigestBytes = 32;
using Digest = std::array<std::uint8_t, kDigestBytes>;

/// Incremental BLAKE2b-256.
class Hasher {
 public:
  Hasher();
  Hasher& update(std::string_view bytes);
  Hasher& update(const void* data, std::size_t size);
  Hasher& update_u64(std::uint64_t value);  // little-endian
  Digest finish();

 private:
  alignas(64) unsigned char state_[384];
};

Digest digest_of(std::string_view bytes);
std::string to_hex(const Digest& digest);
/// Throws FormatError on malformed input.
Digest digest_from_hex(std::string_view hex);

/// Standard base64 (RFC 4648) with padding. decode ignores ASCII whitespace and
/// throws FormatError on invalid input.
std::string base64_encode(std::string_view bytes);
std::string base64_decode(std::string_view text);

}  // namespace sleuth
