#include "remis/rng.hpp"

#include <algorithm>

namespace remis {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  std::uint64_t state = master;
  std::uint64_t out = splitmix64(state);
  state ^= splitmix64(state) + 0x9E3779B97F4A7C15ULL * (a + 1);
  out ^= splitmix64(state);
  state ^= splitmix64(state) + 0xD1B54A32D192ED03ULL * (b + 1);
  out ^= splitmix64(state);
  return out;
}

namespace {
inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
}  // namespace

Xoshiro256::Xoshiro256(std::uint64_t seed) {
  std::uint64_t state = seed;
  for (auto& s : s_) s = splitmix64(state);
}

Xoshiro256::Xoshiro256(const SeedSpec& spec, std::uint64_t purpose)
    : Xoshiro256(derive_seed(spec.master_seed, spec.replicate_index, purpose)) {}

std::uint64_t Xoshiro256::next_u64() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Xoshiro256::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

Vector cumulative(const Vector& weights) {
  Vector cdf(weights.size());
  double acc = 0.0;
  for (Index i = 0; i < weights.size(); ++i) {
    acc += weights(i);
    cdf(i) = acc;
  }
  return cdf;
}

Index sample_cdf(const Vector& cdf, double u) {
  const double target = u * cdf(cdf.size() - 1);
  const double* begin = cdf.data();
  const double* end = begin + cdf.size();
  const double* it = std::upper_bound(begin, end, target);
  if (it == end) --it;  // final bucket absorbs rounding slack
  return static_cast<Index>(it - begin);
}

}  // namespace remis
