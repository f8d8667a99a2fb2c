#pragma once

#include <cstdint>

#include "remis/types.hpp"

namespace remis {

/// Identifier recorded in output metadata so results can be tied to the
/// exact generator that produced them.
inline constexpr const char* kRngAlgorithm = "splitmix64/xoshiro256starstar";

/// Seed for one logical random stream. Streams for distinct
/// (master_seed, replicate_index) pairs are derived independently.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t replicate_index = 0;
};

std::uint64_t splitmix64(std::uint64_t& state);

/// Collapses (master, a, b) into a single stream seed. Used to give each
/// (replicate, sample size) task its own reproducible stream.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0);

/// xoshiro256** seeded via splitmix64; deterministic across platforms.
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed);
  explicit Xoshiro256(const SeedSpec& spec, std::uint64_t purpose = 0);

  std::uint64_t next_u64();
  /// Uniform double in [0, 1) with 53 random bits.
  double next_double();

 private:
  std::uint64_t s_[4];
};

/// Inverse-CDF draw from a categorical distribution given its cumulative
/// weights (last entry absorbs rounding slack).
Index sample_cdf(const Vector& cdf, double u);

/// Cumulative sums in the fixed flattening order.
Vector cumulative(const Vector& weights);

}  // namespace remis
