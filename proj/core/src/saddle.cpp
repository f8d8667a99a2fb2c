#include "remis/saddle.hpp"

#include <algorithm>
#include <cmath>

namespace remis {

namespace {

void check_positive(const StateActionDist& d_D, const char* who) {
  if (d_D.weights.minCoeff() <= 0.0)
    throw ZeroDenominator(std::string(who) + ": d_D must be strictly positive");
}

}  // namespace

SaddleReport w_star(const TabularMdp& mdp, const Policy& pol, const StateActionDist& nu,
                    const SAFunction& fprime_at_qpi, const StateActionDist& d_D) {
  check_positive(d_D, "w_star");
  const Matrix P = transition_matrix(mdp, pol);
  const Index n = P.rows();
  const Matrix A = Matrix::Identity(n, n) - mdp.gamma * P.transpose();

  const Vector rhs = nu.weights.cwiseProduct(fprime_at_qpi);
  const Vector flow = linalg::solve_linear(A, rhs);  // d_D o w*
  SAFunction dual = flow.cwiseQuotient(d_D.weights);

  SaddleReport rep;
  rep.stationarity_residual = (A * d_D.weights.cwiseProduct(dual) - rhs).cwiseAbs().maxCoeff() /
                              std::max(1.0, rhs.cwiseAbs().maxCoeff());
  rep.sup_norm = dual.cwiseAbs().maxCoeff();
  rep.coverage_bound = w_star_bound(mdp, pol, nu, fprime_at_qpi, d_D);
  rep.dual = std::move(dual);
  return rep;
}

SaddleReport q_star(const TabularMdp& mdp, const Policy& pol, const StateActionDist& eta,
                    const SAFunction& fprime_at_wpi, const StateActionDist& d_D) {
  check_positive(d_D, "q_star");
  const Matrix P = transition_matrix(mdp, pol);
  const Index n = P.rows();
  const Matrix A = Matrix::Identity(n, n) - mdp.gamma * P;

  const Vector rhs =
      fprime_at_wpi.cwiseProduct(eta.weights).cwiseQuotient(d_D.weights);
  SAFunction dual = linalg::solve_linear(A, rhs);

  SaddleReport rep;
  rep.stationarity_residual = (A * dual - rhs).cwiseAbs().maxCoeff() /
                              std::max(1.0, rhs.cwiseAbs().maxCoeff());
  rep.sup_norm = dual.cwiseAbs().maxCoeff();
  rep.dual = std::move(dual);
  return rep;
}

double w_star_bound(const TabularMdp& mdp, const Policy& pol, const StateActionDist& nu,
                    const SAFunction& fprime_at_qpi, const StateActionDist& d_D) {
  check_positive(d_D, "w_star_bound");
  const StateActionDist d_nu = occupancy(mdp, pol, nu);
  const double ratio = d_nu.weights.cwiseQuotient(d_D.weights).maxCoeff();
  const double fsup = fprime_at_qpi.cwiseAbs().maxCoeff();
  return ratio * fsup / (1.0 - mdp.gamma);
}

}  // namespace remis
