#include "remis/mdp.hpp"

#include <cmath>
#include <utility>

namespace remis {

void TabularMdp::validate() const {
  if (n_states <= 0 || n_actions <= 0) throw ConfigError("mdp: empty state or action space");
  if (gamma < 0.0 || gamma >= 1.0) throw ConfigError("mdp: gamma must be in [0,1)");
  if (static_cast<Index>(transition.size()) != n_actions)
    throw ConfigError("mdp: one transition matrix per action required");
  for (const Matrix& P : transition) {
    if (P.rows() != n_states || P.cols() != n_states)
      throw ConfigError("mdp: transition matrix shape mismatch");
    if (P.minCoeff() < 0.0) throw ConfigError("mdp: negative transition probability");
    for (Index s = 0; s < n_states; ++s)
      if (std::abs(P.row(s).sum() - 1.0) > 1e-12)
        throw ConfigError("mdp: transition row does not sum to one");
  }
  if (mean_reward.rows() != n_states || mean_reward.cols() != n_actions)
    throw ConfigError("mdp: mean_reward shape mismatch");
  if (mean_reward.minCoeff() < 0.0 || mean_reward.maxCoeff() > 1.0)
    throw ConfigError("mdp: mean rewards must lie in [0,1]");
  if (mu0.size() != n_states || mu0.minCoeff() < 0.0 || std::abs(mu0.sum() - 1.0) > 1e-12)
    throw ConfigError("mdp: mu0 is not a distribution over states");
}

void Policy::validate() const {
  if (probs.rows() <= 0 || probs.cols() <= 0) throw ConfigError("policy: empty");
  if (probs.minCoeff() < 0.0) throw ConfigError("policy: negative probability");
  for (Index s = 0; s < probs.rows(); ++s)
    if (std::abs(probs.row(s).sum() - 1.0) > 1e-12)
      throw ConfigError("policy: row does not sum to one");
}

StateActionDist::StateActionDist(Vector w) : weights(std::move(w)) {
  if (weights.size() == 0) throw ConfigError("distribution: empty");
  if (weights.minCoeff() < 0.0) throw ConfigError("distribution: negative weight");
  if (std::abs(weights.sum() - 1.0) > 1e-10)
    throw ConfigError("distribution: weights do not sum to one");
}

StateActionDist StateActionDist::normalized(Vector w) {
  if (w.size() == 0) throw ConfigError("distribution: empty");
  // Solver output can carry negative dust; clip it before rescaling.
  for (Index i = 0; i < w.size(); ++i) {
    if (w(i) < 0.0) {
      if (w(i) < -1e-12) throw ConfigError("distribution: negative weight");
      w(i) = 0.0;
    }
  }
  const double total = w.sum();
  if (total <= 0.0) throw EmptySupport("distribution: all weights vanish");
  return StateActionDist(w / total);
}

Matrix transition_matrix(const TabularMdp& mdp, const Policy& pol) {
  const Index S = mdp.n_states, A = mdp.n_actions, n = S * A;
  if (pol.n_states() != S || pol.n_actions() != A)
    throw ConfigError("transition_matrix: policy shape mismatch");
  Matrix P = Matrix::Zero(n, n);
  for (Index s = 0; s < S; ++s)
    for (Index a = 0; a < A; ++a) {
      const Index row = sa_index(s, a, A);
      for (Index s2 = 0; s2 < S; ++s2) {
        const double p = mdp.transition[a](s, s2);
        if (p == 0.0) continue;
        for (Index a2 = 0; a2 < A; ++a2)
          P(row, sa_index(s2, a2, A)) = p * pol.probs(s2, a2);
      }
    }
  return P;
}

SAFunction exact_q(const TabularMdp& mdp, const Policy& pol) {
  const Matrix P = transition_matrix(mdp, pol);
  const Index n = P.rows();
  const Matrix A = Matrix::Identity(n, n) - mdp.gamma * P;
  Vector r(n);
  for (Index s = 0; s < mdp.n_states; ++s)
    for (Index a = 0; a < mdp.n_actions; ++a)
      r(sa_index(s, a, mdp.n_actions)) = mdp.mean_reward(s, a);
  return linalg::solve_linear(A, r);
}

SAFunction bellman_backup(const TabularMdp& mdp, const Policy& pol, const SAFunction& q) {
  const Matrix P = transition_matrix(mdp, pol);
  Vector r(P.rows());
  for (Index s = 0; s < mdp.n_states; ++s)
    for (Index a = 0; a < mdp.n_actions; ++a)
      r(sa_index(s, a, mdp.n_actions)) = mdp.mean_reward(s, a);
  return r + mdp.gamma * (P * q);
}

StateActionDist occupancy(const TabularMdp& mdp, const Policy& pol,
                          const StateActionDist& init) {
  const Matrix P = transition_matrix(mdp, pol);
  const Index n = P.rows();
  if (init.size() != n) throw ConfigError("occupancy: init size mismatch");
  const Matrix A = Matrix::Identity(n, n) - mdp.gamma * P.transpose();
  Vector d = (1.0 - mdp.gamma) * linalg::solve_linear(A, init.weights);
  return StateActionDist::normalized(std::move(d));
}

StateActionDist initial_sa_dist(const TabularMdp& mdp, const Policy& pol) {
  const Index S = mdp.n_states, A = mdp.n_actions;
  Vector w(S * A);
  for (Index s = 0; s < S; ++s)
    for (Index a = 0; a < A; ++a) w(sa_index(s, a, A)) = mdp.mu0(s) * pol.probs(s, a);
  return StateActionDist(std::move(w));
}

SAFunction weight_function(const StateActionDist& d_pi, const StateActionDist& d_D) {
  if (d_pi.size() != d_D.size()) throw ConfigError("weight_function: size mismatch");
  if (d_D.weights.minCoeff() <= 0.0)
    throw ZeroDenominator("weight_function: data distribution has zero mass somewhere");
  return d_pi.weights.cwiseQuotient(d_D.weights);
}

double return_of(const TabularMdp& mdp, const Policy& pol) {
  const SAFunction q = exact_q(mdp, pol);
  const StateActionDist mu0_pi = initial_sa_dist(mdp, pol);
  const StateActionDist d_pi = occupancy(mdp, pol, mu0_pi);

  const double via_q = (1.0 - mdp.gamma) * mu0_pi.weights.dot(q);
  Vector r(mdp.sa_count());
  for (Index s = 0; s < mdp.n_states; ++s)
    for (Index a = 0; a < mdp.n_actions; ++a)
      r(sa_index(s, a, mdp.n_actions)) = mdp.mean_reward(s, a);
  const double via_d = d_pi.weights.dot(r);

  if (std::abs(via_q - via_d) > 1e-8)
    throw NumericalError("return_of: value- and occupancy-based returns disagree");
  return via_q;
}

double policy_value_at(const SAFunction& f, const Policy& pol, Index s) {
  const Index A = pol.n_actions();
  double v = 0.0;
  for (Index a = 0; a < A; ++a) v += pol.probs(s, a) * f(sa_index(s, a, A));
  return v;
}

}  // namespace remis
