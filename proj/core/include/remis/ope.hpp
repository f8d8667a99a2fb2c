#pragma once

#include "remis/estimators.hpp"
#include "remis/mdp.hpp"
#include "remis/sampling.hpp"

namespace remis {

/// Value-based return estimate: (1-gamma) mean_i q_hat(s0_i, pi).
double j_q(const SAFunction& q_hat, const InitDataset& init, const Policy& pol,
           double gamma);

/// Weight-based return estimate: mean_i w_hat(s_i, a_i) r_i.
double j_w(const SAFunction& w_hat, const Dataset& data, const Policy& pol);

/// Doubly robust combination. The correction term multiplies the discounted
/// next-state value: w (r + gamma q_hat(s',pi) - q_hat(s,a)); only this form
/// cancels exactly when either nuisance is exact. `literal_no_gamma` drops
/// the discount on q_hat(s',pi) for comparison.
double j_dr(const SAFunction& q_hat, const SAFunction& w_hat, const Dataset& data,
            const InitDataset& init, const Policy& pol, double gamma,
            bool literal_no_gamma = false);

/// Exact-expectation counterparts (initial term under mu0_pi, data term
/// under d_D with mean rewards).
double j_q_pop(const SAFunction& q_hat, const PopulationModel& pop);
double j_w_pop(const SAFunction& w_hat, const PopulationModel& pop);
double j_dr_pop(const SAFunction& q_hat, const SAFunction& w_hat,
                const PopulationModel& pop, bool literal_no_gamma = false);

struct OpeReport {
  double j_q = 0.0;
  double j_w = 0.0;
  double j_dr = 0.0;
  double j_true = 0.0;
  double err_q = 0.0;
  double err_w = 0.0;
  double err_dr = 0.0;
};

OpeReport ope_report(const SAFunction& q_hat, const SAFunction& w_hat, const Dataset& data,
                     const InitDataset& init, const Policy& pol, double gamma,
                     double j_true);

}  // namespace remis
