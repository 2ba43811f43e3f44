#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include "bcglpm/errors.hpp"
#include "bcglpm/normal.hpp"

namespace bcglpm {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace detail

// Seedable stream built on xoshiro256++ (256-bit state).  The state is
// seeded with splitmix64 from the 64-bit seed, then jumped forward
// `stream_id` times; each jump advances 2^128 steps, so distinct stream
// ids give provably non-overlapping subsequences of the same cycle.
//
// Identical (seed, stream_id) produce identical draw sequences.  A stream
// is owned by exactly one chain; there is no shared mutable state.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed = 0, std::uint64_t stream_id = 0)
      : seed_(seed), stream_id_(stream_id) {
    std::uint64_t sm = seed;
    for (auto& w : s_) w = detail::splitmix64(sm);
    for (std::uint64_t j = 0; j < stream_id; ++j) jump();
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64() {
    const std::uint64_t result = detail::rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = detail::rotl(s_[3], 45);
    return result;
  }

  // Uniform on the open interval (0, 1): safe to pass through log().
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n) {
    if (n == 0) throw numeric_error("uniform_index: empty range");
    const std::uint64_t threshold = (~n + 1) % n;  // = 2^64 mod n
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  // Standard normal by CDF inversion; deterministic one-uniform mapping.
  double normal() { return normal_quantile(uniform()); }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  // Gamma(shape, scale=1), Marsaglia-Tsang; shape < 1 via the boost trick.
  double gamma(double shape) {
    if (!(shape > 0.0)) throw numeric_error("gamma: shape must be > 0");
    if (shape < 1.0) {
      const double u = uniform();
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  double beta(double a, double b) {
    const double x = gamma(a);
    const double y = gamma(b);
    return x / (x + y);
  }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  // Jump polynomial of xoshiro256++ (advance by 2^128).
  void jump() {
    static constexpr std::uint64_t kJump[4] = {
        0x180ec6d33cfd0abaULL, 0xd5a61266f0c9392cULL,
        0xa9582618e03fc9aaULL, 0x39abdc4529b1661cULL};
    std::uint64_t t[4] = {0, 0, 0, 0};
    for (const std::uint64_t word : kJump) {
      for (int b = 0; b < 64; ++b) {
        if (word & (1ULL << b)) {
          t[0] ^= s_[0];
          t[1] ^= s_[1];
          t[2] ^= s_[2];
          t[3] ^= s_[3];
        }
        next_u64();
      }
    }
    for (int i = 0; i < 4; ++i) s_[i] = t[i];
  }

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::array<std::uint64_t, 4> s_{};
};

// Stable 64-bit mix for deriving sub-seeds (per window, per cell, ...).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t sm = seed ^ (0x9e3779b97f4a7c15ULL * (salt + 1));
  return detail::splitmix64(sm);
}

}  // namespace bcglpm
