#pragma once

#include <array>
#include <complex>
#include <cstdint>

namespace rmimo {

// Deterministic random stream: xoshiro256** state seeded through SplitMix64,
// normals via Box-Muller.  Self-contained on purpose; the standard library's
// distributions are free to differ between implementations, and reproducing a
// run bit for bit across machines and worker counts is part of the contract.
class RandomStream {
 public:
  RandomStream() : RandomStream(0) {}
  explicit RandomStream(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform on [0, 1), 53-bit resolution.
  double uniform();
  double uniform(double lo, double hi);

  // Standard normal.  Box-Muller produces pairs; the spare is cached, so
  // draws come in a fixed order regardless of how they are consumed.
  double normal();

  // Circularly-symmetric complex normal with unit total variance:
  // real and imaginary parts are independent N(0, 1/2).
  std::complex<double> cnormal();

 private:
  std::array<std::uint64_t, 4> state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Collision-free child seed: splitmix(splitmix(root) + index).  SplitMix64 is
// a bijection, so distinct indices under one root give distinct seeds.
std::uint64_t derive_seed(std::uint64_t root_seed, std::uint64_t index);

// Independent stream for one unit of work.  Streams with different indices
// under the same root never share state, so work units can run in any order
// or in parallel without changing a single drawn value.
RandomStream split_stream(std::uint64_t root_seed, std::uint64_t index);

}  // namespace rmimo
