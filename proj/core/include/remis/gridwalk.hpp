#pragma once

#include <array>
#include <string>

#include "remis/mdp.hpp"

namespace remis {

enum class RewardShape { InverseManhattan };

/// How the offline data distribution d_D is derived from the behavior policy.
enum class DataDistMode {
  /// Exact discounted occupancy from mu0 (default).
  DiscountedOccupancy,
  /// Occupancy truncated at a finite horizon, then renormalized.
  TruncatedOccupancy,
};

struct GridwalkConfig {
  Index width = 10;
  Index height = 10;
  double gamma = 0.95;
  RewardShape reward_shape = RewardShape::InverseManhattan;
  /// Cells with w_pi above this threshold form the support of p.
  double p_threshold = 50.0;
  /// Uniform mixing floor applied to d_D so every pair keeps positive mass.
  double mix_eps = 1e-4;
  DataDistMode data_dist = DataDistMode::DiscountedOccupancy;
  Index truncation_horizon = 100;
};

/// Grid world with four actions (right, down, left, up), goal at the lower
/// right corner, reward 1/(1 + manhattan distance to goal), and initial
/// states uniform over the upper half. Moves into walls stay in place.
struct GridwalkEnv {
  TabularMdp mdp;
  Policy target;    // right until the right wall, then down
  Policy behavior;  // (0.1, 0.4, 0.5, 0) until the right wall, then (0, .5, .5, 0)
  GridwalkConfig cfg;
};

GridwalkEnv build_gridwalk(const GridwalkConfig& cfg = {});

/// The named regularizing / evaluation distributions used in experiments.
struct DistributionFamily {
  StateActionDist d_D;
  StateActionDist mu0_pi;
  StateActionDist d_pi;
  StateActionDist U;
  StateActionDist p;

  static constexpr std::array<const char*, 5> kNames = {"d_D", "mu0_pi", "d_pi", "U", "p"};
  const StateActionDist& by_name(const std::string& name) const;
};

/// Builds {d_D, mu0_pi, d_pi, U, p} with p ~ d_pi restricted to pairs where
/// the density ratio exceeds cfg.p_threshold. Throws EmptySupport when the
/// threshold leaves nothing.
DistributionFamily distribution_family(const TabularMdp& mdp, const Policy& target,
                                       const Policy& behavior, const GridwalkConfig& cfg);

}  // namespace remis
