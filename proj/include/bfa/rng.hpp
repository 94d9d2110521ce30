#pragma once

#include <cstdint>
#include <string_view>

namespace bfa {

// SplitMix64 mixer. The generator state advances by a fixed increment, so the
// k-th output is a pure function of (seed, k); streams derived from distinct
// keys can be generated in any order and merged deterministically.
constexpr std::uint64_t golden_gamma = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

class Rng {
 public:
  explicit constexpr Rng(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next_u64() {
    state_ += golden_gamma;
    return mix64(state_);
  }

  // Uniform on (0, 1]; never returns 0, so closed-form inversions that divide
  // by the draw stay finite.
  double next_unit_positive() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Uniform on [0, 1).
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  int next_sign() { return (next_u64() >> 63) ? 1 : -1; }

 private:
  std::uint64_t state_;
};

// Stream key for the k-th independent substream of a master seed.
constexpr std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t k) {
  return mix64(seed ^ mix64(k * golden_gamma + 0xD1B54A32D192ED03ULL));
}

// FNV-1a, used to pin per-check RNG streams to stable string labels.
constexpr std::uint64_t hash_label(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

}  // namespace bfa
