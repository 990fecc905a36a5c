#include "sleuth/digest.hpp"

#include <sodium.h>

#include <cstring>
#include <stdexcept>

#include "sleuth/error.hpp"

namespace sleuth {

namespace {

void ensure_sodium() {
  static const int status = sodium_init();
  if (status < 0) throw std::runtime_error("libsodium initialisation failed");
}

crypto_generichash_state* state_of(unsigned char* raw) {
  return reinterpret_cast<crypto_generichash_state*>(raw);
}

}  // namespace

static_assert(sizeof(crypto_generichash_state) <= 384);

Hasher::Hasher() {
  ensure_sodium();
  crypto_generichash_init(state_of(state_), nullptr, 0, kDigestBytes);
}

Hasher& Hasher::update(std::string_view bytes) { return update(bytes.data(), bytes.size()); }

Hasher& Hasher::update(const void* data, std::size_t size) {
  crypto_generichash_update(state_of(state_), static_cast<const unsigned char*>(data), size);
  return *this;
}

Hasher& Hasher::update_u64(std::uint64_t value) {
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(value >> (8 * i));
  return update(buf, sizeof(buf));
}

Digest Hasher::finish() {
  Digest out{};
  crypto_generichash_final(state_of(state_), out.data(), out.size());
  return out;
}

Digest digest_of(std::string_view bytes) { return Hasher().update(bytes).finish(); }

std::string to_hex(const Digest& digest) {
  ensure_sodium();
  std::string out(digest.size() * 2 + 1, '\0');
  sodium_bin2hex(out.data(), out.size(), digest.data(), digest.size());
  out.pop_back();
  return out;
}

Digest digest_from_hex(std::string_view hex) {
  ensure_sodium();
  Digest out{};
  std::size_t written = 0;
  const char* end = nullptr;
  if (hex.size() != out.size() * 2 ||
      sodium_hex2bin(out.data(), out.size(), hex.data(), hex.size(), nullptr, &written, &end) != 0 ||
      written != out.size()) {
    throw Error(ErrorCode::kFormatError, "malformed digest '" + std::string(hex) + "'");
  }
  return out;
}

std::string base64_encode(std::string_view bytes) {
  ensure_sodium();
  const int variant = sodium_base64_VARIANT_ORIGINAL;
  std::string out(sodium_base64_ENCODED_LEN(bytes.size(), variant), '\0');
  sodium_bin2base64(out.data(), out.size(), reinterpret_cast<const unsigned char*>(bytes.data()),
                    bytes.size(), variant);
  out.resize(std::strlen(out.c_str()));
  return out;
}

std::string base64_decode(std::string_view text) {
  ensure_sodium();
  std::string out(text.size() / 4 * 3 + 3, '\0');
  std::size_t written = 0;
  const char* end = nullptr;
  const int rc = sodium_base642bin(reinterpret_cast<unsigned char*>(out.data()), out.size(),
                                   text.data(), text.size(), " \t\r\n", &written, &end,
                                   sodium_base64_VARIANT_ORIGINAL);
  if (rc != 0 || end != text.data() + text.size()) {
    throw Error(ErrorCode::kFormatError, "invalid base64 payload");
  }
  out.resize(written);
  return out;
}

}  // namespace sleuth
