#pragma once

#include <cstdint>
#include <random>

namespace glmb {

// SplitMix64 step. Used to turn one master seed into decorrelated per-stream seeds
// (per chain, per scan, per trial) so that nearby tags do not give nearby states.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t mix_tag(std::uint64_t h, std::uint64_t tag) {
  std::uint64_t s = h ^ (tag + 0x9e3779b97f4a7c15ull + (h << 12) + (h >> 4));
  return splitmix64(s);
}

// Deterministic substream seed: hash the master seed with an ordered tag list.
template <typename... Tags>
std::uint64_t derive_seed(std::uint64_t master, Tags... tags) {
  std::uint64_t s = master;
  std::uint64_t h = splitmix64(s);
  ((h = mix_tag(h, static_cast<std::uint64_t>(tags))), ...);
  return h;
}

// One random stream. Every chain / scenario / trial owns exactly one of these;
// nothing is shared, so results do not depend on scheduling.
class StreamRng {
 public:
  explicit StreamRng(std::uint64_t seed) : engine_(seed) {}

  double uniform01() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
  }
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  int uniform_int(int lo, int hi) {  // inclusive bounds
    return std::uniform_int_distribution<int>(lo, hi)(engine_);
  }
  double normal(double mean, double stddev) {
    return std::normal_distribution<double>(mean, stddev)(engine_);
  }
  int poisson(double rate) {
    return std::poisson_distribution<int>(rate)(engine_);
  }
  bool bernoulli(double p) { return uniform01() < p; }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace glmb
