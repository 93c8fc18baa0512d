#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>

namespace graphnoise {

/// SplitMix64 finalizer, used for seed expansion and key mixing.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Order-sensitive combination of 64-bit tokens into one value. The result
/// depends only on the token sequence, never on the platform, so it is safe
/// to use for reproducible per-cell seeds.
constexpr std::uint64_t stable_mix(std::initializer_list<std::uint64_t> tokens) noexcept {
  std::uint64_t acc = 0x8f1bbcdcbfa53e0bULL;
  for (std::uint64_t t : tokens) acc = splitmix64(acc ^ t);
  return acc;
}

/// Streaming 64-bit FNV-1a.
class Fnv1a {
 public:
  void update(const void* data, std::size_t len) noexcept {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      state_ ^= bytes[i];
      state_ *= 0x100000001b3ULL;
    }
  }

  void update(std::string_view bytes) noexcept { update(bytes.data(), bytes.size()); }

  std::uint64_t digest() const noexcept { return state_; }

  /// Digest as 16 lowercase hex characters.
  std::string hex() const {
    static const char* kDigits = "0123456789abcdef";
    std::string out(16, '0');
    std::uint64_t v = state_;
    for (int i = 15; i >= 0; --i) {
      out[static_cast<std::size_t>(i)] = kDigits[v & 0xf];
      v >>= 4;
    }
    return out;
  }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

inline std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  Fnv1a h;
  h.update(bytes);
  return h.digest();
}

}  // namespace graphnoise
