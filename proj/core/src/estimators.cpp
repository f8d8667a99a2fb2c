#include "remis/estimators.hpp"

#include <cmath>
#include <utility>

namespace remis {

PopulationModel population_mode(const TabularMdp& mdp, const Policy& pol,
                                const StateActionDist& d_D, const StateActionDist& mu0_pi) {
  PopulationModel pop;
  pop.mdp = mdp;
  pop.pol = pol;
  pop.d_D = d_D;
  pop.mu0_pi = mu0_pi;
  pop.p_pi = transition_matrix(mdp, pol);
  return pop;
}

Matrix policy_averaged_features(const LinearClass& cls, const Policy& pol) {
  const Index S = pol.n_states(), A = pol.n_actions();
  if (cls.features.rows() != S * A)
    throw ConfigError("policy_averaged_features: class size mismatch");
  Matrix out = Matrix::Zero(S, cls.width());
  for (Index s = 0; s < S; ++s)
    for (Index a = 0; a < A; ++a) {
      const double w = pol.probs(s, a);
      if (w != 0.0) out.row(s) += w * cls.features.row(sa_index(s, a, A));
    }
  return out;
}

ConstraintSystem build_q_system(const Dataset& data, const LinearClass& primal,
                                const LinearClass& disc, const Policy& pol, double gamma) {
  if (data.size() == 0) throw ConfigError("build_q_system: empty dataset");
  const Index A = pol.n_actions();
  const Matrix phibar = policy_averaged_features(primal, pol);

  ConstraintSystem sys;
  sys.G = Matrix::Zero(disc.width(), primal.width());
  sys.h = Vector::Zero(disc.width());
  const double inv_n = 1.0 / static_cast<double>(data.size());
  Vector u(primal.width());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Index sa = sa_index(data.s[i], data.a[i], A);
    u = primal.features.row(sa).transpose() - gamma * phibar.row(data.s_next[i]).transpose();
    sys.G.noalias() += disc.features.row(sa).transpose() * u.transpose();
    sys.h.noalias() += data.r[i] * disc.features.row(sa).transpose();
  }
  sys.G *= inv_n;
  sys.h *= inv_n;
  return sys;
}

ConstraintSystem build_q_system(const PopulationModel& pop, const LinearClass& primal,
                                const LinearClass& disc) {
  const TabularMdp& mdp = pop.mdp;
  const Index n = mdp.sa_count();
  Vector r(n);
  for (Index s = 0; s < mdp.n_states; ++s)
    for (Index a = 0; a < mdp.n_actions; ++a)
      r(sa_index(s, a, mdp.n_actions)) = mdp.mean_reward(s, a);

  ConstraintSystem sys;
  const Matrix bellman = primal.features - mdp.gamma * (pop.p_pi * primal.features);
  sys.G = disc.features.transpose() * pop.d_D.weights.asDiagonal() * bellman;
  sys.h = disc.features.transpose() * pop.d_D.weights.cwiseProduct(r);
  return sys;
}

ConstraintSystem build_w_system(const Dataset& data, const InitDataset& init,
                                const LinearClass& primal, const LinearClass& disc,
                                const Policy& pol, double gamma) {
  if (data.size() == 0) throw ConfigError("build_w_system: empty dataset");
  if (init.size() == 0) throw ConfigError("build_w_system: empty initial-state sample");
  const Index A = pol.n_actions();
  const Matrix phibar = policy_averaged_features(disc, pol);

  ConstraintSystem sys;
  sys.G = Matrix::Zero(disc.width(), primal.width());
  sys.h = Vector::Zero(disc.width());
  const double inv_n = 1.0 / static_cast<double>(data.size());
  Vector u(disc.width());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Index sa = sa_index(data.s[i], data.a[i], A);
    u = disc.features.row(sa).transpose() - gamma * phibar.row(data.s_next[i]).transpose();
    sys.G.noalias() += u * primal.features.row(sa);
  }
  sys.G *= inv_n;

  const double inv_n0 = 1.0 / static_cast<double>(init.size());
  for (Index s0 : init.s0) sys.h.noalias() += phibar.row(s0).transpose();
  sys.h *= (1.0 - gamma) * inv_n0;
  return sys;
}

ConstraintSystem build_w_system(const PopulationModel& pop, const LinearClass& primal,
                                const LinearClass& disc) {
  const TabularMdp& mdp = pop.mdp;
  ConstraintSystem sys;
  const Matrix bellman = disc.features - mdp.gamma * (pop.p_pi * disc.features);
  sys.G = bellman.transpose() * pop.d_D.weights.asDiagonal() * primal.features;
  sys.h = (1.0 - mdp.gamma) * disc.features.transpose() * pop.mu0_pi.weights;
  return sys;
}

namespace {

QEstimate finish(const LinearClass& primal, linalg::KktSolution&& kkt,
                 const ConstraintSystem& sys) {
  QEstimate est;
  est.coefficients = std::move(kkt.primal);
  est.values = primal.features * est.coefficients;
  est.constraint_residual = (sys.G * est.coefficients - sys.h).norm();
  est.diagnostics["rank_G"] = static_cast<double>(kkt.rank_constraints);
  est.diagnostics["feasibility_residual"] = est.constraint_residual;
  est.diagnostics["stationarity_residual"] = kkt.stationarity_residual;
  est.diagnostics["degenerate_objective"] = kkt.degenerate_objective ? 1.0 : 0.0;
  est.diagnostics["coefficient_sup"] =
      est.coefficients.size() ? est.coefficients.cwiseAbs().maxCoeff() : 0.0;
  est.diagnostics["value_sup"] = est.values.size() ? est.values.cwiseAbs().maxCoeff() : 0.0;
  return est;
}

}  // namespace

QEstimate solve_regularized(const ConstraintSystem& sys, const LinearClass& primal,
                            const Regularizer& reg, const StateActionDist& nu) {
  if (reg.anchor.size() != primal.features.rows())
    throw ConfigError("solve_regularized: anchor size mismatch");
  if (nu.size() != primal.features.rows())
    throw ConfigError("solve_regularized: nu size mismatch");

  const Matrix weighted = nu.weights.asDiagonal() * primal.features;
  const Matrix H = reg.strong_convexity * (primal.features.transpose() * weighted);
  const Vector g =
      reg.strong_convexity * (primal.features.transpose() * nu.weights.cwiseProduct(reg.anchor));
  auto kkt = linalg::solve_equality_qp(H, g, sys.G, sys.h);
  return finish(primal, std::move(kkt), sys);
}

QEstimate solve_unregularized(const ConstraintSystem& sys, const LinearClass& primal) {
  linalg::KktSolution kkt;
  kkt.primal = linalg::least_squares_min_norm(sys.G, sys.h);
  kkt.multipliers = Vector(0);
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(sys.G);
  kkt.rank_constraints = cod.rank();
  kkt.stationarity_residual = 0.0;
  return finish(primal, std::move(kkt), sys);
}

QEstimate estimate_q(const Dataset& data, const LinearClass& primal,
                     const LinearClass& disc, const Regularizer& reg,
                     const StateActionDist& nu, const Policy& pol, double gamma) {
  return solve_regularized(build_q_system(data, primal, disc, pol, gamma), primal, reg, nu);
}

QEstimate estimate_q(const PopulationModel& pop, const LinearClass& primal,
                     const LinearClass& disc, const Regularizer& reg,
                     const StateActionDist& nu) {
  return solve_regularized(build_q_system(pop, primal, disc), primal, reg, nu);
}

WEstimate estimate_w(const Dataset& data, const InitDataset& init,
                     const LinearClass& primal, const LinearClass& disc,
                     const Regularizer& reg, const StateActionDist& eta,
                     const Policy& pol, double gamma) {
  return solve_regularized(build_w_system(data, init, primal, disc, pol, gamma), primal,
                           reg, eta);
}

WEstimate estimate_w(const PopulationModel& pop, const LinearClass& primal,
                     const LinearClass& disc, const Regularizer& reg,
                     const StateActionDist& eta) {
  return solve_regularized(build_w_system(pop, primal, disc), primal, reg, eta);
}

double population_lagrangian_q(const SAFunction& q, const SAFunction& w,
                               const TabularMdp& mdp, const Policy& pol,
                               const StateActionDist& d_D, const Regularizer& reg,
                               const StateActionDist& nu) {
  const SAFunction backed = bellman_backup(mdp, pol, q);
  const double reg_term = nu.weights.dot(value_at(reg, q));
  const double residual_term = d_D.weights.dot(w.cwiseProduct(backed - q));
  return reg_term + residual_term;
}

double population_lagrangian_w(const SAFunction& w, const SAFunction& q,
                               const TabularMdp& mdp, const Policy& pol,
                               const StateActionDist& d_D, const Regularizer& reg,
                               const StateActionDist& eta) {
  const Matrix P = transition_matrix(mdp, pol);
  const StateActionDist mu0_pi = initial_sa_dist(mdp, pol);
  const double reg_term = eta.weights.dot(value_at(reg, w));
  const double init_term = (1.0 - mdp.gamma) * mu0_pi.weights.dot(q);
  const double flow_term = d_D.weights.dot(w.cwiseProduct(mdp.gamma * (P * q) - q));
  return reg_term + init_term + flow_term;
}

double weighted_l2_error(const SAFunction& est, const SAFunction& truth,
                         const StateActionDist& dist) {
  if (est.size() != truth.size() || est.size() != dist.size())
    throw ConfigError("weighted_l2_error: size mismatch");
  const Vector diff = est - truth;
  return std::sqrt(dist.weights.dot(diff.cwiseProduct(diff)));
}

double q_error_bound(const BoundInputs& in) {
  if (in.n == 0 || in.delta <= 0.0 || in.delta >= 1.0 || in.M <= 0.0)
    throw ConfigError("q_error_bound: invalid inputs");
  const double log_term =
      std::log(2.0) + in.log_card_W + in.log_card_Q - std::log(in.delta);
  const double eps = (in.C_W + (1.0 + in.gamma) * in.C_W * in.C_Q) *
                     std::sqrt(2.0 * log_term / static_cast<double>(in.n));
  return 2.0 * std::sqrt(eps / in.M);
}

double w_error_bound(const BoundInputs& in) {
  if (in.n == 0 || in.n0 == 0 || in.delta <= 0.0 || in.delta >= 1.0 || in.M <= 0.0)
    throw ConfigError("w_error_bound: invalid inputs");
  const double log_n =
      std::log(4.0) + in.log_card_Q + in.log_card_W - std::log(in.delta);
  const double log_n0 = std::log(4.0) + in.log_card_Q - std::log(in.delta);
  const double eps =
      (in.C_f + (1.0 + in.gamma) * in.C_W * in.C_Q) *
          std::sqrt(2.0 * log_n / static_cast<double>(in.n)) +
      (1.0 - in.gamma) * in.C_Q * std::sqrt(2.0 * log_n0 / static_cast<double>(in.n0));
  return 2.0 * std::sqrt(eps / in.M);
}

}  // namespace remis
