#include "remis/regularizer.hpp"

#include <utility>

namespace remis {

Regularizer quadratic(SAFunction anchor) {
  if (!all_finite(anchor)) throw ConfigError("regularizer: anchor must be finite");
  return Regularizer{std::move(anchor), 1.0};
}

SAFunction value_at(const Regularizer& reg, const SAFunction& point) {
  if (point.size() != reg.anchor.size()) throw ConfigError("regularizer: size mismatch");
  const Vector diff = point - reg.anchor;
  return 0.5 * reg.strong_convexity * diff.cwiseProduct(diff);
}

SAFunction derivative_at(const Regularizer& reg, const SAFunction& point) {
  if (point.size() != reg.anchor.size()) throw ConfigError("regularizer: size mismatch");
  return reg.strong_convexity * (point - reg.anchor);
}

SAFunction uniform_model(const SAFunction& q_pi, double m, const StateActionDist& p,
                         bool masked, bool support_average) {
  if (m < 0.0 || m > 1.0) throw ConfigError("uniform_model: m must lie in [0,1]");
  if (p.size() != q_pi.size()) throw ConfigError("uniform_model: size mismatch");
  const Index n = q_pi.size();

  double sum = 0.0;
  Index support = 0;
  for (Index i = 0; i < n; ++i)
    if (p(i) > 0.0) {
      sum += q_pi(i);
      ++support;
    }
  if (support_average && support == 0)
    throw EmptySupport("uniform_model: p has empty support");
  const double qbar = sum / static_cast<double>(support_average ? support : n);

  SAFunction model = m * q_pi + Vector::Constant(n, (1.0 - m) * qbar);
  if (masked)
    for (Index i = 0; i < n; ++i)
      if (p(i) <= 0.0) model(i) = 0.0;
  return model;
}

}  // namespace remis
