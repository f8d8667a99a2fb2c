#pragma once

#include <optional>
#include <string>

#include "remis/gridwalk.hpp"
#include "remis/mdp.hpp"

namespace remis {

/// A linear function class: candidate functions are features * coefficients.
struct LinearClass {
  /// One row per state-action pair, one column per basis function.
  Matrix features;
  std::string name;
  /// Per-column rescale factors applied during construction (spans are
  /// unaffected; recorded so raw columns can be recovered).
  Vector column_scales;

  Index width() const { return features.cols(); }
};

/// Indicator features that aggregate pairs sharing the same value of q_pi
/// rounded to `decimals` places. Rounding is half-away-from-zero; values
/// within 1e-12 of a rounding boundary are nudged toward zero first so the
/// grouping does not depend on the platform's rounding of ties.
LinearClass aggregate_by_value(const SAFunction& q_pi, int decimals = 3);

/// Discriminator class realizing, for every nu in the family, the optimal
/// weight-side dual of the plain quadratic objective. Two columns per nu:
///   (I - gamma P_pi')^{-1}(nu o q_pi) / d_D   (the dual itself)
///   (I - gamma P_pi')^{-1}(nu o q_pi)         (kept for conditioning)
/// Columns are rescaled to unit sup norm.
LinearClass value_ratio_discriminators(const TabularMdp& mdp, const Policy& pol,
                                       const DistributionFamily& family,
                                       const SAFunction& q_pi, const StateActionDist& d_D);

/// Discriminator class that stays realizable when the regularizer anchors to
/// a masked blended model. Three columns per nu, with mask = 1{mask_dist > 0}:
///   (I - gamma P_pi')^{-1}(nu o q_pi)
///   (I - gamma P_pi')^{-1}(nu o q_pi o mask)
///   (I - gamma P_pi')^{-1}(nu o mask)
/// Pass an everywhere-positive mask_dist for unmasked models; the second and
/// third families then collapse onto their unmasked forms.
LinearClass masked_model_discriminators(const TabularMdp& mdp, const Policy& pol,
                                        const DistributionFamily& family,
                                        const SAFunction& q_pi, const StateActionDist& d_D,
                                        const StateActionDist& mask_dist);

/// Primal class for weight estimation. One column per nu:
///   (I - gamma P_pi')^{-1} nu / d_D,
/// so the true density ratio is in the span (take nu = mu0_pi).
LinearClass weight_primal_features(const TabularMdp& mdp, const Policy& pol,
                                   const DistributionFamily& family,
                                   const StateActionDist& d_D);

/// Discriminator class for weight estimation. One column per eta:
///   (I - gamma P_pi)^{-1}(eta o w_pi / d_D),
/// the optimal value-side dual of the plain quadratic objective under eta.
LinearClass weight_discriminator_features(const TabularMdp& mdp, const Policy& pol,
                                          const DistributionFamily& family,
                                          const SAFunction& w_pi,
                                          const StateActionDist& d_D);

/// Smallest weighted 2-norm residual of projecting `target` onto the span of
/// the class. Uniform weights when `weight` is absent.
double realizability_check(const LinearClass& cls, const SAFunction& target,
                           const std::optional<StateActionDist>& weight = std::nullopt);

}  // namespace remis
