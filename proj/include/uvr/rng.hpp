#pragma once

#include <cstdint>
#include <random>

namespace uvr {

// Deterministic random stream. mt19937_64 output is pinned by the standard;
// the distribution code below is ours, so sequences are reproducible across
// compilers and platforms (std:: distributions are not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  // Independent stream derived from a master seed and a stream label.
  static Rng derive(std::uint64_t master, std::uint64_t stream) {
    return Rng(splitmix(splitmix(master) ^ splitmix(stream * 0x9e3779b97f4a7c15ULL + 1)));
  }

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform in [0, n); multiply-shift bounding (bias < 2^-64, acceptable here).
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * static_cast<unsigned __int128>(n)) >> 64);
  }

  // Uniform integer in [lo, hi] inclusive.
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  bool chance(double p) { return uniform01() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace uvr
