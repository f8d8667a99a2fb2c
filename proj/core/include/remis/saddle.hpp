#pragma once

#include <optional>

#include "remis/mdp.hpp"

namespace remis {

/// A closed-form optimal dual together with its diagnostics.
struct SaddleReport {
  SAFunction dual;
  /// Sup norm of the linear stationarity identity evaluated at `dual`,
  /// relative to max(1, sup norm of the right-hand side). The duals reach
  /// 1e8 on shifted instances, where an absolute residual is meaningless.
  double stationarity_residual = 0.0;
  double sup_norm = 0.0;
  /// Occupancy-ratio upper bound on ||dual||_inf (weight dual only).
  std::optional<double> coverage_bound;
};

/// Optimal weight-side dual of the regularized value-estimation objective:
///   w* = (I - gamma P_pi')^{-1} (nu o f'(q_pi)) / d_D,
/// which satisfies (I - gamma P_pi') (d_D o w*) = nu o f'(q_pi).
SaddleReport w_star(const TabularMdp& mdp, const Policy& pol, const StateActionDist& nu,
                    const SAFunction& fprime_at_qpi, const StateActionDist& d_D);

/// Optimal value-side dual of the regularized weight-estimation objective:
///   q* = (I - gamma P_pi)^{-1} (f'(w_pi) o eta / d_D).
SaddleReport q_star(const TabularMdp& mdp, const Policy& pol, const StateActionDist& eta,
                    const SAFunction& fprime_at_wpi, const StateActionDist& d_D);

/// Upper bound ||w*||_inf <= ||d_nu_pi / d_D||_inf ||f'(q_pi)||_inf / (1-gamma),
/// where d_nu_pi is the discounted occupancy started from nu.
double w_star_bound(const TabularMdp& mdp, const Policy& pol, const StateActionDist& nu,
                    const SAFunction& fprime_at_qpi, const StateActionDist& d_D);

}  // namespace remis
