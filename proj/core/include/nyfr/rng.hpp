#pragma once

#include <array>
#include <cstdint>

#include "nyfr/types.hpp"

namespace nyfr {

// Counter-based Philox4x32-10 generator.  A (seed, stream) pair names a
// deterministic sequence regardless of call order elsewhere in the program,
// which is what makes per-trial reproducibility in sweeps cheap: every trial
// owns its own stream and never shares mutable state.
class Philox4x32 {
 public:
  explicit Philox4x32(std::uint64_t seed, std::uint64_t stream = 0);

  // Raw 128-bit block for a given counter value; pure function of
  // (seed, stream, index).  Exposed for known-answer tests.
  static std::array<std::uint32_t, 4> block(const std::array<std::uint32_t, 4>& counter,
                                            const std::array<std::uint32_t, 2>& key);

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  double next_double();  // uniform on [0, 1)
  double next_gauss();   // standard normal (Box-Muller)
  // Circularly symmetric complex normal with E[|z|^2] = variance.
  cplx next_cgauss(double variance);

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_ = 0;
  std::uint64_t block_index_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int buffer_pos_ = 4;  // empty
  double gauss_spare_ = 0.0;
  bool has_gauss_spare_ = false;
};

// splitmix64-based mixing of a base seed with up to two subordinate indices
// (e.g. sweep point and trial number).  Collision-resistant enough that
// adjacent trials get unrelated Philox streams.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a = 0, std::uint64_t b = 0);

}  // namespace nyfr
