#pragma once

#include <Eigen/Dense>

#include "remis/types.hpp"

namespace remis::linalg {

/// Solution of an equality-constrained quadratic program
///   min_x 0.5 x'Hx - g'x   s.t.  Gx = h.
struct KktSolution {
  Vector primal;
  Vector multipliers;
  /// 2-norm of G*primal - h. Nonzero exactly when h had a component outside
  /// range(G); the solve then ran against the projection of h onto range(G).
  double constraint_residual = 0.0;
  /// Numerical rank of the constraint matrix G.
  Index rank_constraints = 0;
  /// Sup norm of H*primal - g + G'*multipliers at the returned point.
  double stationarity_residual = 0.0;
  /// True when null(H) and null(G) intersect nontrivially, i.e. the
  /// minimum-norm tie-break was exercised beyond the constraint null space.
  bool degenerate_objective = false;
};

/// Solve a square linear system by LU with partial pivoting.
/// Throws SingularMatrix when a pivot collapses or the solution fails the
/// backward-error test ||Ax-b|| <= rtol (||A||_inf ||x|| + ||b||), rtol 1e-10.
Vector solve_linear(const Matrix& A, const Vector& b);

/// One LU factorization reused across many right-hand sides. Each solve
/// runs one iterative-refinement step against the retained matrix.
class LuSolver {
 public:
  explicit LuSolver(Matrix A);
  Vector solve(const Vector& b) const;
  Matrix solve(const Matrix& B) const;

 private:
  Matrix a_;
  Eigen::PartialPivLU<Matrix> lu_;
  double anorm_ = 0.0;
};

/// Minimum-2-norm solution of min_x ||Ax - b||_2, any shape and rank.
/// Rank is decided by a pivot threshold of max(rows, cols) * eps relative to
/// the largest pivot (complete orthogonal decomposition).
Vector least_squares_min_norm(const Matrix& A, const Vector& b);

/// Equality-constrained quadratic program with a PSD Hessian.
///
/// Minimizes 0.5 a'Ha - g'a subject to Ga = h. When h is not in range(G)
/// the constraints are replaced by their projection onto range(G) and the
/// discrepancy is reported in constraint_residual. Among all optima the
/// minimum-norm primal is returned, with minimum-norm multipliers.
KktSolution solve_equality_qp(const Matrix& H, const Vector& g, const Matrix& G,
                              const Vector& h);

}  // namespace remis::linalg
