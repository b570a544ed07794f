#pragma once

#include <cstdint>
#include <random>

namespace pffw {

// splitmix64 step; also used to derive independent stream seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Deterministic seed derivation: one master seed plus a tag (iteration
// counter, purpose salt, ...) yields an independent-looking stream seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
  std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ull + (tag << 1));
  std::uint64_t a = splitmix64(s);
  std::uint64_t b = splitmix64(s);
  return a ^ (b >> 7) ^ tag;
}

// Thin wrapper over mt19937_64 so call sites stay terse.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() { return unif_(gen_); }                       // [0, 1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal() { return norm_(gen_); }
  // uniform integer in [lo, hi] inclusive
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(gen_);
  }
  std::mt19937_64& raw() { return gen_; }

 private:
  std::mt19937_64 gen_;
  std::uniform_real_distribution<double> unif_{0.0, 1.0};
  std::normal_distribution<double> norm_{0.0, 1.0};
};

// Opaque handle for one stochastic-oracle draw. Problems regenerate their
// randomness (a data vector, a revealed index set, ...) deterministically
// from the key, so evaluating twice at the same (x, sample) is reproducible.
struct Sample {
  std::uint64_t key = 0;
};

// Per-run stream of sample handles.
class SampleStream {
 public:
  explicit SampleStream(std::uint64_t seed) : state_(mix_seed(seed, 0x5a17)) {}
  Sample next() { return Sample{splitmix64(state_)}; }

 private:
  std::uint64_t state_;
};

}  // namespace pffw
