#include "geowl/hash.hpp"

#include <sodium.h>

#include <array>
#include <cstdio>

namespace geowl {

namespace {

// Fixed hashing key: digests must be reproducible across runs and machines.
constexpr std::array<std::uint8_t, 16> kHashKey = {
    0x67, 0x65, 0x6f, 0x77, 0x6c, 0x2d, 0x66, 0x70,
    0x2d, 0x6b, 0x65, 0x79, 0x2d, 0x76, 0x30, 0x31};

void ensure_sodium() {
  static const int rc = sodium_init();
  (void)rc;  // generichash works even when init reports "already initialized"
}

}  // namespace

Digest128 digest_bytes(const std::uint8_t* data, std::size_t size) {
  ensure_sodium();
  std::array<std::uint8_t, 16> out{};
  crypto_generichash(out.data(), out.size(), data, size, kHashKey.data(), kHashKey.size());
  Digest128 d;
  for (int i = 0; i < 8; ++i) {
    d.hi |= static_cast<std::uint64_t>(out[i]) << (8 * i);
    d.lo |= static_cast<std::uint64_t>(out[8 + i]) << (8 * i);
  }
  return d;
}

std::string Digest128::hex() const {
  char buf[33];
  std::snprintf(buf, sizeof(buf), "%016llx%016llx",
                static_cast<unsigned long long>(hi), static_cast<unsigned long long>(lo));
  return std::string(buf);
}

}  // namespace geowl
