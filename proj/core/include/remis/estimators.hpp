#pragma once

#include <map>
#include <string>

#include "remis/features.hpp"
#include "remis/mdp.hpp"
#include "remis/regularizer.hpp"
#include "remis/sampling.hpp"

namespace remis {

/// Linear constraint system G * coefficients = h obtained by testing the
/// (empirical or exact) Bellman residual against each discriminator column.
struct ConstraintSystem {
  Matrix G;
  Vector h;
};

/// Exact-expectation provider. Swapping a Dataset for one of these replaces
/// every sample average with its expectation under d_D (and mu0 for the
/// initial-state terms); the code path downstream is shared.
struct PopulationModel {
  TabularMdp mdp;
  Policy pol;
  StateActionDist d_D;
  StateActionDist mu0_pi;
  /// Cached state-action transition operator of pol.
  Matrix p_pi;
};

PopulationModel population_mode(const TabularMdp& mdp, const Policy& pol,
                                const StateActionDist& d_D, const StateActionDist& mu0_pi);

/// Policy-averaged features per state: row s is sum_a pol(a|s) features(s,a).
Matrix policy_averaged_features(const LinearClass& cls, const Policy& pol);

/// Constraint system for value estimation. Row j, column c:
///   (1/n) sum_i psi_j(s_i,a_i) (phi_c(s_i,a_i) - gamma phibar_c(s_i'))
/// with right-hand side (1/n) sum_i psi_j(s_i,a_i) r_i.
ConstraintSystem build_q_system(const Dataset& data, const LinearClass& primal,
                                const LinearClass& disc, const Policy& pol, double gamma);
ConstraintSystem build_q_system(const PopulationModel& pop, const LinearClass& primal,
                                const LinearClass& disc);

/// Constraint system for weight estimation. Row j (one per discriminator
/// column phi_j), column c:
///   (1/n) sum_i psi_c(s_i,a_i) (phi_j(s_i,a_i) - gamma phibar_j(s_i'))
/// with right-hand side (1-gamma) (1/n0) sum_l phibar_j(s0_l).
ConstraintSystem build_w_system(const Dataset& data, const InitDataset& init,
                                const LinearClass& primal, const LinearClass& disc,
                                const Policy& pol, double gamma);
ConstraintSystem build_w_system(const PopulationModel& pop, const LinearClass& primal,
                                const LinearClass& disc);

struct QEstimate {
  Vector coefficients;
  SAFunction values;
  double constraint_residual = 0.0;
  std::map<std::string, double> diagnostics;
};
using WEstimate = QEstimate;

/// Minimizes 0.5 ||primal a - anchor||^2 weighted by nu, subject to the
/// constraint system. The max over the discriminator class is equivalent to
/// the equality constraints, so the whole saddle problem is one KKT solve.
QEstimate solve_regularized(const ConstraintSystem& sys, const LinearClass& primal,
                            const Regularizer& reg, const StateActionDist& nu);

/// Zero-regularization limit: minimum-norm coefficients satisfying the
/// constraints alone.
QEstimate solve_unregularized(const ConstraintSystem& sys, const LinearClass& primal);

QEstimate estimate_q(const Dataset& data, const LinearClass& primal,
                     const LinearClass& disc, const Regularizer& reg,
                     const StateActionDist& nu, const Policy& pol, double gamma);
QEstimate estimate_q(const PopulationModel& pop, const LinearClass& primal,
                     const LinearClass& disc, const Regularizer& reg,
                     const StateActionDist& nu);

WEstimate estimate_w(const Dataset& data, const InitDataset& init,
                     const LinearClass& primal, const LinearClass& disc,
                     const Regularizer& reg, const StateActionDist& eta,
                     const Policy& pol, double gamma);
WEstimate estimate_w(const PopulationModel& pop, const LinearClass& primal,
                     const LinearClass& disc, const Regularizer& reg,
                     const StateActionDist& eta);

/// Exact value-side objective
///   E_nu[f(q)] + E_dD[w (r + gamma q(s',pi) - q(s,a))].
double population_lagrangian_q(const SAFunction& q, const SAFunction& w,
                               const TabularMdp& mdp, const Policy& pol,
                               const StateActionDist& d_D, const Regularizer& reg,
                               const StateActionDist& nu);

/// Exact weight-side objective
///   E_eta[f(w)] + (1-gamma) E_mu0[q(s,pi)] + E_dD[w (gamma q(s',pi) - q(s,a))].
double population_lagrangian_w(const SAFunction& w, const SAFunction& q,
                               const TabularMdp& mdp, const Policy& pol,
                               const StateActionDist& d_D, const Regularizer& reg,
                               const StateActionDist& eta);

/// sqrt(sum_i dist(i) (est(i) - truth(i))^2)
double weighted_l2_error(const SAFunction& est, const SAFunction& truth,
                         const StateActionDist& dist);

/// Inputs to the high-probability error bounds: class sup norms, log
/// cardinalities, sample sizes, confidence level, strong convexity.
struct BoundInputs {
  double C_W = 0.0;
  double C_Q = 0.0;
  double log_card_W = 0.0;
  double log_card_Q = 0.0;
  std::size_t n = 0;
  std::size_t n0 = 0;
  double delta = 0.05;
  double M = 1.0;
  double C_f = 0.0;
  double gamma = 0.0;
};

/// High-probability bound on ||q_hat - q_pi||_{2,nu}:
///   2 sqrt(eps / M),  eps = (C_W + (1+gamma) C_W C_Q) sqrt(2 log(2|W||Q|/delta) / n).
double q_error_bound(const BoundInputs& in);

/// High-probability bound on ||w_hat - w_pi||_{2,eta}:
///   2 sqrt(eps / M),
///   eps = (C_f + (1+gamma) C_W C_Q) sqrt(2 log(4|Q||W|/delta) / n)
///       + (1-gamma) C_Q sqrt(2 log(4|Q|/delta) / n0).
double w_error_bound(const BoundInputs& in);

}  // namespace remis
