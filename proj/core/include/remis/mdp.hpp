#pragma once

#include <vector>

#include "remis/linalg.hpp"
#include "remis/types.hpp"

namespace remis {

/// Finite MDP with per-action transition matrices and mean rewards in [0,1].
struct TabularMdp {
  Index n_states = 0;
  Index n_actions = 0;
  /// transition[a](s, s') = P(s' | s, a)
  std::vector<Matrix> transition;
  /// mean_reward(s, a) = E[r | s, a]
  Matrix mean_reward;
  double gamma = 0.0;
  /// Initial state distribution over states.
  Vector mu0;

  Index sa_count() const { return n_states * n_actions; }

  /// Checks row-stochastic transitions, reward range, gamma in [0,1),
  /// and mu0 summing to one. Throws ConfigError on violation.
  void validate() const;
};

struct Policy {
  /// probs(s, a) = pi(a | s); rows sum to one.
  Matrix probs;

  Index n_states() const { return probs.rows(); }
  Index n_actions() const { return probs.cols(); }
  void validate() const;
};

/// Probability distribution over the flattened state-action space.
struct StateActionDist {
  Vector weights;

  explicit StateActionDist(Vector w);
  StateActionDist() = default;

  Index size() const { return weights.size(); }
  double operator()(Index i) const { return weights(i); }

  /// Rescales a nonnegative vector to sum one.
  static StateActionDist normalized(Vector w);
};

/// State-action transition operator of pi:
/// entry ((s,a),(s',a')) = P(s'|s,a) pi(a'|s').
Matrix transition_matrix(const TabularMdp& mdp, const Policy& pol);

/// Unique fixed point of q = r + gamma P^pi q.
SAFunction exact_q(const TabularMdp& mdp, const Policy& pol);

/// One application of the Bellman operator: r + gamma P^pi q.
SAFunction bellman_backup(const TabularMdp& mdp, const Policy& pol, const SAFunction& q);

/// Discounted state-action occupancy started from `init`:
/// d = (1-gamma) (I - gamma P^pi')^{-1} init.
StateActionDist occupancy(const TabularMdp& mdp, const Policy& pol,
                          const StateActionDist& init);

/// mu0 lifted to state-action pairs through the policy.
StateActionDist initial_sa_dist(const TabularMdp& mdp, const Policy& pol);

/// Elementwise density ratio d_pi / d_D. Throws ZeroDenominator when the
/// data distribution vanishes anywhere.
SAFunction weight_function(const StateActionDist& d_pi, const StateActionDist& d_D);

/// Normalized expected discounted return, computed two equivalent ways
/// ((1-gamma)<mu0_pi, q> and <d_pi, r>) which must agree to 1e-8.
double return_of(const TabularMdp& mdp, const Policy& pol);

/// Policy-averaged value at a state: sum_a pi(a|s) f(s,a).
double policy_value_at(const SAFunction& f, const Policy& pol, Index s);

}  // namespace remis
