#include "remis/features.hpp"

#include <cmath>
#include <map>
#include <utility>
#include <vector>

namespace remis {

namespace {

double round_half_away(double v, int decimals) {
  const double scale = std::pow(10.0, decimals);
  double scaled = v * scale;
  // Nudge values sitting on a rounding boundary toward zero.
  const double frac = scaled - std::floor(scaled);
  if (std::abs(frac - 0.5) < 1e-12 * std::max(1.0, std::abs(scaled)))
    scaled -= std::copysign(1e-9, scaled);
  return std::copysign(std::floor(std::abs(scaled) + 0.5), scaled) / scale;
}

void rescale_columns(Matrix& F, Vector& scales) {
  scales.resize(F.cols());
  for (Index c = 0; c < F.cols(); ++c) {
    const double sup = F.col(c).cwiseAbs().maxCoeff();
    scales(c) = sup > 0.0 ? sup : 1.0;
    F.col(c) /= scales(c);
  }
}

}  // namespace

LinearClass aggregate_by_value(const SAFunction& q_pi, int decimals) {
  if (decimals < 0) throw ConfigError("aggregate_by_value: decimals must be nonnegative");
  const Index n = q_pi.size();
  std::map<double, Index> columns;  // rounded value -> column, ascending
  std::vector<double> rounded(n);
  for (Index i = 0; i < n; ++i) {
    rounded[i] = round_half_away(q_pi(i), decimals);
    columns.emplace(rounded[i], 0);
  }
  Index next = 0;
  for (auto& [value, col] : columns) col = next++;

  LinearClass cls;
  cls.name = "value_aggregate";
  cls.features = Matrix::Zero(n, static_cast<Index>(columns.size()));
  for (Index i = 0; i < n; ++i) cls.features(i, columns.at(rounded[i])) = 1.0;
  cls.column_scales = Vector::Ones(cls.features.cols());
  return cls;
}

LinearClass value_ratio_discriminators(const TabularMdp& mdp, const Policy& pol,
                                       const DistributionFamily& family,
                                       const SAFunction& q_pi, const StateActionDist& d_D) {
  if (d_D.weights.minCoeff() <= 0.0)
    throw ZeroDenominator("value_ratio_discriminators: d_D has zero mass");
  const Index n = mdp.sa_count();
  const Matrix P = transition_matrix(mdp, pol);
  const linalg::LuSolver flow(Matrix::Identity(n, n) - mdp.gamma * P.transpose());

  LinearClass cls;
  cls.name = "value_ratio_disc";
  cls.features.resize(n, 2 * static_cast<Index>(DistributionFamily::kNames.size()));
  Index c = 0;
  for (const char* name : DistributionFamily::kNames) {
    const Vector x = flow.solve(Vector(family.by_name(name).weights.cwiseProduct(q_pi)));
    cls.features.col(c++) = x.cwiseQuotient(d_D.weights);
    cls.features.col(c++) = x;
  }
  rescale_columns(cls.features, cls.column_scales);
  return cls;
}

LinearClass masked_model_discriminators(const TabularMdp& mdp, const Policy& pol,
                                        const DistributionFamily& family,
                                        const SAFunction& q_pi, const StateActionDist& d_D,
                                        const StateActionDist& mask_dist) {
  if (d_D.weights.minCoeff() <= 0.0)
    throw ZeroDenominator("masked_model_discriminators: d_D has zero mass");
  const Index n = mdp.sa_count();
  Vector mask(n);
  for (Index i = 0; i < n; ++i) mask(i) = mask_dist(i) > 0.0 ? 1.0 : 0.0;

  const Matrix P = transition_matrix(mdp, pol);
  const linalg::LuSolver flow(Matrix::Identity(n, n) - mdp.gamma * P.transpose());

  LinearClass cls;
  cls.name = "masked_model_disc";
  cls.features.resize(n, 3 * static_cast<Index>(DistributionFamily::kNames.size()));
  Index c = 0;
  for (const char* name : DistributionFamily::kNames) {
    const Vector& nu = family.by_name(name).weights;
    cls.features.col(c++) = flow.solve(Vector(nu.cwiseProduct(q_pi)));
    cls.features.col(c++) = flow.solve(Vector(nu.cwiseProduct(q_pi).cwiseProduct(mask)));
    cls.features.col(c++) = flow.solve(Vector(nu.cwiseProduct(mask)));
  }
  rescale_columns(cls.features, cls.column_scales);
  return cls;
}

LinearClass weight_primal_features(const TabularMdp& mdp, const Policy& pol,
                                   const DistributionFamily& family,
                                   const StateActionDist& d_D) {
  if (d_D.weights.minCoeff() <= 0.0)
    throw ZeroDenominator("weight_primal_features: d_D has zero mass");
  const Index n = mdp.sa_count();
  const Matrix P = transition_matrix(mdp, pol);
  const linalg::LuSolver flow(Matrix::Identity(n, n) - mdp.gamma * P.transpose());

  LinearClass cls;
  cls.name = "weight_primal";
  cls.features.resize(n, static_cast<Index>(DistributionFamily::kNames.size()));
  Index c = 0;
  for (const char* name : DistributionFamily::kNames)
    cls.features.col(c++) =
        flow.solve(family.by_name(name).weights).cwiseQuotient(d_D.weights);
  rescale_columns(cls.features, cls.column_scales);
  return cls;
}

LinearClass weight_discriminator_features(const TabularMdp& mdp, const Policy& pol,
                                          const DistributionFamily& family,
                                          const SAFunction& w_pi,
                                          const StateActionDist& d_D) {
  if (d_D.weights.minCoeff() <= 0.0)
    throw ZeroDenominator("weight_discriminator_features: d_D has zero mass");
  const Index n = mdp.sa_count();
  const Matrix P = transition_matrix(mdp, pol);
  const linalg::LuSolver value(Matrix::Identity(n, n) - mdp.gamma * P);

  LinearClass cls;
  cls.name = "weight_disc";
  cls.features.resize(n, static_cast<Index>(DistributionFamily::kNames.size()));
  Index c = 0;
  for (const char* name : DistributionFamily::kNames) {
    const Vector& eta = family.by_name(name).weights;
    cls.features.col(c++) =
        value.solve(Vector(eta.cwiseProduct(w_pi).cwiseQuotient(d_D.weights)));
  }
  rescale_columns(cls.features, cls.column_scales);
  return cls;
}

double realizability_check(const LinearClass& cls, const SAFunction& target,
                           const std::optional<StateActionDist>& weight) {
  const Index n = cls.features.rows();
  if (target.size() != n) throw ConfigError("realizability_check: size mismatch");
  Vector sqrt_w;
  if (weight) {
    if (weight->size() != n) throw ConfigError("realizability_check: weight size mismatch");
    sqrt_w = weight->weights.cwiseSqrt();
  } else {
    sqrt_w = Vector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  }
  const Matrix A = sqrt_w.asDiagonal() * cls.features;
  const Vector b = sqrt_w.cwiseProduct(target);
  const Vector coeff = linalg::least_squares_min_norm(A, b);
  return (A * coeff - b).norm();
}

}  // namespace remis
