#include "remis/diagnostics.hpp"

#include <cmath>
#include <sstream>

#include "remis/experiments.hpp"
#include "remis/regularizer.hpp"
#include "remis/rng.hpp"
#include "remis/saddle.hpp"

namespace remis {

namespace {

std::string describe(double value, double limit) {
  std::ostringstream os;
  os << value << " (limit " << limit << ")";
  return os.str();
}

SAFunction random_function(Xoshiro256& rng, Index n, double scale) {
  SAFunction f(n);
  for (Index i = 0; i < n; ++i) f(i) = scale * (2.0 * rng.next_double() - 1.0);
  return f;
}

}  // namespace

std::vector<CheckResult> run_invariant_suite(const GridwalkConfig& cfg, std::uint64_t seed) {
  std::vector<CheckResult> out;
  const auto push = [&](const std::string& name, bool pass, const std::string& detail) {
    out.push_back(CheckResult{name, pass, detail});
  };

  const Workspace ws = build_workspace(cfg);
  const TabularMdp& mdp = ws.env.mdp;
  const Policy& pi = ws.env.target;
  const Index n = mdp.sa_count();
  Xoshiro256 rng(seed);

  // Bellman fixed point and flow residuals.
  {
    const double bellman =
        (ws.q_pi - bellman_backup(mdp, pi, ws.q_pi)).cwiseAbs().maxCoeff();
    push("bellman_residual", bellman <= 1e-8, describe(bellman, 1e-8));

    const Matrix P = transition_matrix(mdp, pi);
    const Vector flow = ws.family.d_pi.weights -
                        ((1.0 - mdp.gamma) * ws.family.mu0_pi.weights +
                         mdp.gamma * P.transpose() * ws.family.d_pi.weights);
    push("flow_residual", flow.cwiseAbs().maxCoeff() <= 1e-8,
         describe(flow.cwiseAbs().maxCoeff(), 1e-8));

    const double norm = ws.family.d_D.weights.dot(ws.w_pi);
    push("weight_normalization", std::abs(norm - 1.0) <= 1e-8, describe(norm, 1.0));
  }

  // Closed-form duals for every regularizing distribution, plain quadratic.
  for (const char* name : DistributionFamily::kNames) {
    const StateActionDist& nu = ws.family.by_name(name);
    const SaddleReport wrep = w_star(mdp, pi, nu, ws.q_pi, ws.family.d_D);
    push(std::string("w_star_stationarity_") + name, wrep.stationarity_residual <= 1e-8,
         describe(wrep.stationarity_residual, 1e-8));
    push(std::string("w_star_coverage_bound_") + name,
         wrep.sup_norm <= *wrep.coverage_bound + 1e-8,
         describe(wrep.sup_norm, *wrep.coverage_bound));
    const SaddleReport qrep = q_star(mdp, pi, nu, ws.w_pi, ws.family.d_D);
    push(std::string("q_star_stationarity_") + name, qrep.stationarity_residual <= 1e-8,
         describe(qrep.stationarity_residual, 1e-8));
  }

  // Anchoring at the truth kills the dual.
  {
    const SAFunction zero = SAFunction::Zero(n);
    const SaddleReport wrep = w_star(mdp, pi, ws.family.U, zero, ws.family.d_D);
    push("w_star_zero_at_truth", wrep.sup_norm <= 1e-12, describe(wrep.sup_norm, 1e-12));
  }

  // Population identification for every nu.
  for (const char* name : DistributionFamily::kNames) {
    const StateActionDist& nu = ws.family.by_name(name);
    const Regularizer reg = quadratic(SAFunction::Zero(n));
    const QEstimate est = estimate_q(ws.pop, ws.primal, ws.disc_ratio, reg, nu);
    const double err = weighted_l2_error(est.values, ws.q_pi, nu);
    push(std::string("population_identification_") + name, err <= 1e-6, describe(err, 1e-6));
  }

  // Strong convexity and the saddle gap on random probes.
  {
    const Regularizer reg = quadratic(SAFunction::Zero(n));
    const SaddleReport wrep = w_star(mdp, pi, ws.family.U, ws.q_pi, ws.family.d_D);
    const double base =
        population_lagrangian_q(ws.q_pi, wrep.dual, mdp, pi, ws.family.d_D, reg, ws.family.U);
    double worst_gap = 0.0, worst_convexity = 0.0;
    for (int probe = 0; probe < 20; ++probe) {
      const SAFunction q = random_function(rng, n, 25.0);
      const double lhs =
          population_lagrangian_q(q, wrep.dual, mdp, pi, ws.family.d_D, reg, ws.family.U);
      const double dist = weighted_l2_error(q, ws.q_pi, ws.family.U);
      worst_gap = std::max(worst_gap, base + 0.5 * dist * dist - lhs);

      const SAFunction q2 = random_function(rng, n, 25.0);
      const double lhs2 = ws.family.U.weights.dot(value_at(reg, q)) -
                          ws.family.U.weights.dot(value_at(reg, q2));
      const Vector fprime = derivative_at(reg, q2);
      const double rhs2 = ws.family.U.weights.cwiseProduct(fprime).dot(q - q2) +
                          0.5 * std::pow(weighted_l2_error(q, q2, ws.family.U), 2);
      worst_convexity = std::max(worst_convexity, std::abs(lhs2 - rhs2));
    }
    push("saddle_gap", worst_gap <= 1e-10, describe(worst_gap, 1e-10));
    push("strong_convexity_equality", worst_convexity <= 1e-10,
         describe(worst_convexity, 1e-10));
  }

  // Doubly robust identities at population.
  {
    double worst = 0.0;
    for (int probe = 0; probe < 20; ++probe) {
      const SAFunction noise = random_function(rng, n, 5.0);
      worst = std::max(worst, std::abs(j_dr_pop(ws.q_pi, ws.w_pi + noise, ws.pop) - ws.j_true));
      worst = std::max(worst, std::abs(j_dr_pop(ws.q_pi + noise, ws.w_pi, ws.pop) - ws.j_true));
    }
    push("double_robustness", worst <= 1e-8, describe(worst, 1e-8));

    const double triple = std::max(std::abs(j_q_pop(ws.q_pi, ws.pop) - ws.j_true),
                                   std::max(std::abs(j_w_pop(ws.w_pi, ws.pop) - ws.j_true),
                                            std::abs(j_dr_pop(ws.q_pi, ws.w_pi, ws.pop) -
                                                     ws.j_true)));
    push("population_triple_identity", triple <= 1e-10, describe(triple, 1e-10));
  }

  return out;
}

}  // namespace remis
