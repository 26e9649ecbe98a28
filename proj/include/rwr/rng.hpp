#pragma once

#include <cstdint>
#include <random>

namespace rwr {

std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Deterministic random stream. The engine is std::mt19937_64, whose output
// sequence is fixed by the standard; bounded draws are done here rather than
// through std distributions so that logs replay bit-for-bit across
// standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, bound). bound must be positive.
  int below(int bound);

  // Uniform real in [0, 1).
  double unit();

  // Independent child stream; same (seed, stream) always gives the same child.
  Rng split(std::uint64_t stream) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace rwr
