#pragma once

#include "remis/mdp.hpp"
#include "remis/types.hpp"

namespace remis {

/// Per-pair quadratic penalty f(x) = 0.5 (x - anchor)^2 with strong
/// convexity constant 1. The anchor is a model of the function being
/// estimated (zero when no model is available).
struct Regularizer {
  SAFunction anchor;
  double strong_convexity = 1.0;
};

Regularizer quadratic(SAFunction anchor);

/// Elementwise f value at `point`.
SAFunction value_at(const Regularizer& reg, const SAFunction& point);

/// Elementwise derivative f'(point) = point - anchor.
SAFunction derivative_at(const Regularizer& reg, const SAFunction& point);

/// Blended constant-plus-truth model anchor:
///   unmasked: m q_pi + (1-m) qbar
///   masked:  (m q_pi + (1-m) qbar) restricted to the support of p
/// where qbar = sum_i q_pi(i) 1{p(i) > 0} / |SA|. Setting support_average
/// divides by |supp(p)| instead.
SAFunction uniform_model(const SAFunction& q_pi, double m, const StateActionDist& p,
                         bool masked, bool support_average = false);

}  // namespace remis
