#pragma once

#include <cstdint>
#include <cstring>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

namespace geowl {

/// 128-bit canonical digest. Equality of digests is the working notion of
/// equality for encoded features; at 128 bits the collision probability is
/// negligible for any desk-scale corpus.
struct Digest128 {
  std::uint64_t hi = 0;
  std::uint64_t lo = 0;

  friend bool operator==(const Digest128&, const Digest128&) = default;
  friend auto operator<=>(const Digest128&, const Digest128&) = default;

  std::string hex() const;
};

struct Digest128Hash {
  std::size_t operator()(const Digest128& d) const noexcept {
    return static_cast<std::size_t>(d.hi ^ (d.lo * 0x9e3779b97f4a7c15ULL));
  }
};

/// Keyed BLAKE2b-128 over a byte string. The key is fixed so digests are
/// stable across runs and processes.
Digest128 digest_bytes(const std::uint8_t* data, std::size_t size);

/// Growable byte buffer used to build canonical encodings before hashing.
/// All integers are emitted little-endian; doubles are emitted as the bit
/// pattern of their normalized value (-0.0 folded into +0.0).
class ByteBuffer {
 public:
  void clear() { bytes_.clear(); }
  void put_u8(std::uint8_t v) { bytes_.push_back(v); }
  void put_u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void put_i64(std::int64_t v) { put_u64(static_cast<std::uint64_t>(v)); }
  void put_double(double v) { put_u64(double_bits(v)); }
  void put_digest(const Digest128& d) {
    put_u64(d.hi);
    put_u64(d.lo);
  }
  void put_bytes(const std::uint8_t* data, std::size_t size) {
    bytes_.insert(bytes_.end(), data, data + size);
  }

  Digest128 digest() const { return digest_bytes(bytes_.data(), bytes_.size()); }
  const std::vector<std::uint8_t>& bytes() const { return bytes_; }

  /// Bit pattern of a double with -0.0 normalized to +0.0.
  static std::uint64_t double_bits(double v) {
    if (v == 0.0) v = 0.0;
    std::uint64_t u;
    std::memcpy(&u, &v, sizeof(u));
    return u;
  }

 private:
  std::vector<std::uint8_t> bytes_;
};

/// Opaque color identifier. Ids are assigned per refinement run by an
/// interning table: equal ids iff the underlying encoded bytes are equal.
using ColorId = std::uint64_t;

/// Interning table from canonical digests to dense color ids, one per
/// refinement run. Ids start at 1 and follow first-seen order, which is
/// deterministic because every multiset is canonically sorted before use.
class Interner {
 public:
  ColorId intern(const Digest128& digest) {
    auto [it, inserted] = ids_.try_emplace(digest, next_);
    if (inserted) {
      digests_.push_back(digest);
      ++next_;
    }
    return it->second;
  }

  const Digest128& digest_of(ColorId id) const { return digests_[id - 1]; }
  std::size_t size() const { return digests_.size(); }

 private:
  std::unordered_map<Digest128, ColorId, Digest128Hash> ids_;
  std::vector<Digest128> digests_;
  ColorId next_ = 1;
};

}  // namespace geowl
