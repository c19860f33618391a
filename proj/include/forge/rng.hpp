#pragma once

#include <cstdint>
#include <string_view>

namespace forge {

/// Counter-based deterministic generator: output i is a hash of (key, i).
/// Streams for subtasks derive by hashing a label into the key, so every
/// subcommand and every parallel worker draws from an independent,
/// reproducible sequence.
struct Rng {
  std::uint64_t key = 0;
  std::uint64_t ctr = 0;

  explicit Rng(std::uint64_t seed = 0) : key(mix(seed ^ 0x9e3779b97f4a7c15ull)) {}

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  static std::uint64_t hash_label(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (char c : s) h = (h ^ static_cast<unsigned char>(c)) * 0x100000001b3ull;
    return h;
  }

  std::uint64_t next() { return mix(key ^ (0xd1342543de82ef95ull * ++ctr)); }

  /// Independent stream for a named subtask; counter restarts at zero.
  Rng child(std::string_view label) const {
    Rng r;
    r.key = mix(key ^ hash_label(label));
    r.ctr = 0;
    return r;
  }
  Rng child(std::uint64_t index) const {
    Rng r;
    r.key = mix(key ^ mix(index ^ 0xa0761d6478bd642full));
    r.ctr = 0;
    return r;
  }

  double uniform() { return (next() >> 11) * 0x1.0p-53; }

  std::uint64_t below(std::uint64_t n) {
    // rejection sampling keeps the draw unbiased
    std::uint64_t lim = n * ((~0ull) / n);
    std::uint64_t v;
    do { v = next(); } while (v >= lim);
    return v % n;
  }

  bool bernoulli(double p) { return uniform() < p; }
};

}  // namespace forge
