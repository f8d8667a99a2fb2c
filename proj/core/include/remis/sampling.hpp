#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "remis/mdp.hpp"
#include "remis/rng.hpp"

namespace remis {

/// Offline dataset of independent transition tuples, stored columnwise.
struct Dataset {
  std::vector<Index> s;
  std::vector<Index> a;
  std::vector<double> r;
  std::vector<Index> s_next;

  std::size_t size() const { return s.size(); }
  void validate(Index n_states, Index n_actions) const;
};

/// Separate sample of initial states.
struct InitDataset {
  std::vector<Index> s0;
  std::size_t size() const { return s0.size(); }
};

enum class RewardNoise {
  /// Realized reward equals the mean reward (deterministic environments).
  MeanValue,
  /// Bernoulli draw with success probability equal to the mean reward.
  Bernoulli,
};

/// Draws n tuples (s,a) ~ d_D, s' ~ P(.|s,a), r per the noise model.
/// Deterministic given the seed.
Dataset sample_transitions(const TabularMdp& mdp, const StateActionDist& d_D,
                           std::size_t n, const SeedSpec& seed,
                           RewardNoise noise = RewardNoise::MeanValue);

/// Draws n0 initial states from mu0. Deterministic given the seed.
InitDataset sample_initial(const TabularMdp& mdp, std::size_t n0, const SeedSpec& seed);

/// Columnar CSV with header "s,a,r,s_next".
void save_dataset(std::ostream& os, const Dataset& data);
void save_dataset(const std::string& path, const Dataset& data);
Dataset load_dataset(std::istream& is);
Dataset load_dataset(const std::string& path);

void save_init_dataset(std::ostream& os, const InitDataset& init);
void save_init_dataset(const std::string& path, const InitDataset& init);
InitDataset load_init_dataset(std::istream& is);
InitDataset load_init_dataset(const std::string& path);

}  // namespace remis
