#include "remis/linalg.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

namespace remis::linalg {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require(bool ok, const char* what) {
  if (!ok) throw ConfigError(what);
}

}  // namespace

Vector solve_linear(const Matrix& A, const Vector& b) {
  require(A.rows() == A.cols(), "solve_linear: matrix must be square");
  require(A.rows() == b.size(), "solve_linear: size mismatch");
  if (A.rows() == 0) return Vector(0);

  Eigen::PartialPivLU<Matrix> lu(A);
  const Vector udiag = lu.matrixLU().diagonal().cwiseAbs();
  const double umax = udiag.maxCoeff();
  if (umax == 0.0 || udiag.minCoeff() <= static_cast<double>(A.rows()) * kEps * umax)
    throw SingularMatrix("solve_linear: matrix is numerically singular");

  Vector x = lu.solve(b);
  // One round of iterative refinement keeps the absolute residual near
  // machine level even when the right-hand side is poorly scaled.
  x += lu.solve(Vector(b - A * x));
  const double anorm = A.cwiseAbs().rowwise().sum().maxCoeff();
  const double resid = (A * x - b).norm();
  if (resid > 1e-10 * (anorm * x.norm() + b.norm()))
    throw SingularMatrix("solve_linear: backward error check failed");
  return x;
}

LuSolver::LuSolver(Matrix A) : a_(std::move(A)), lu_(a_) {
  require(a_.rows() == a_.cols(), "LuSolver: matrix must be square");
  anorm_ = a_.cwiseAbs().rowwise().sum().maxCoeff();
  const Vector udiag = lu_.matrixLU().diagonal().cwiseAbs();
  const double umax = udiag.size() ? udiag.maxCoeff() : 0.0;
  if (umax == 0.0 || udiag.minCoeff() <= static_cast<double>(a_.rows()) * kEps * umax)
    throw SingularMatrix("LuSolver: matrix is numerically singular");
}

Vector LuSolver::solve(const Vector& b) const {
  Vector x = lu_.solve(b);
  x += lu_.solve(Vector(b - a_ * x));
  return x;
}

Matrix LuSolver::solve(const Matrix& B) const {
  Matrix X = lu_.solve(B);
  X += lu_.solve(Matrix(B - a_ * X));
  return X;
}

Vector least_squares_min_norm(const Matrix& A, const Vector& b) {
  require(A.rows() == b.size(), "least_squares_min_norm: size mismatch");
  if (A.cols() == 0) return Vector(0);
  if (A.rows() == 0) return Vector::Zero(A.cols());

  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(A);
  cod.setThreshold(static_cast<double>(std::max(A.rows(), A.cols())) * kEps);
  if (cod.rank() == 0) return Vector::Zero(A.cols());
  return cod.solve(b);
}

KktSolution solve_equality_qp(const Matrix& H, const Vector& g, const Matrix& G,
                              const Vector& h) {
  const Index d = H.rows();
  require(H.cols() == d, "solve_equality_qp: H must be square");
  require(g.size() == d, "solve_equality_qp: g size mismatch");
  require(G.cols() == d || G.rows() == 0, "solve_equality_qp: G width mismatch");
  require(G.rows() == h.size(), "solve_equality_qp: h size mismatch");

  KktSolution out;
  const Index k = G.rows();

  if (k == 0) {
    // Unconstrained: minimum-norm stationary point of the quadratic.
    out.primal = least_squares_min_norm(H, g);
    out.multipliers = Vector(0);
    Eigen::CompleteOrthogonalDecomposition<Matrix> codH(H);
    codH.setThreshold(static_cast<double>(d) * kEps);
    out.degenerate_objective = codH.rank() < d;
    out.stationarity_residual =
        d == 0 ? 0.0 : (H * out.primal - g).cwiseAbs().maxCoeff();
    return out;
  }

  // SVD of G splits coordinates into range(G') and null(G).
  Eigen::JacobiSVD<Matrix> svd(G, Eigen::ComputeThinU | Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  const double tol = static_cast<double>(std::max(G.rows(), G.cols())) * kEps * smax;
  Index r = 0;
  while (r < sv.size() && sv(r) > tol) ++r;
  out.rank_constraints = r;

  const Matrix Ur = svd.matrixU().leftCols(r);
  const Matrix Vr = svd.matrixV().leftCols(r);
  const Matrix Vn = svd.matrixV().rightCols(d - r);

  // Feasibility against the projection of h onto range(G).
  const Vector uh = Ur.transpose() * h;
  out.constraint_residual = (h - Ur * uh).norm();
  Vector alpha0 = Vr * uh.cwiseQuotient(sv.head(r));

  // Reduced problem over the constraint null space; minimum-norm solve keeps
  // the overall primal minimum-norm because alpha0 is orthogonal to null(G).
  Vector alpha;
  if (d > r) {
    const Matrix M = Vn.transpose() * H * Vn;
    const Vector c = Vn.transpose() * (g - H * alpha0);
    Eigen::CompleteOrthogonalDecomposition<Matrix> codM(M);
    codM.setThreshold(static_cast<double>(d - r) * kEps);
    out.degenerate_objective = codM.rank() < d - r;
    alpha = alpha0 + Vn * (codM.rank() == 0 ? Vector::Zero(d - r).eval()
                                            : codM.solve(c).eval());
  } else {
    alpha = alpha0;
  }

  // Minimum-norm multipliers from stationarity: G' lambda = g - H alpha.
  const Vector resid = g - H * alpha;
  Vector lambda = Vector::Zero(k);
  if (r > 0) lambda = Ur * (Vr.transpose() * resid).cwiseQuotient(sv.head(r));

  out.primal = std::move(alpha);
  out.multipliers = std::move(lambda);
  out.stationarity_residual =
      (H * out.primal - g + G.transpose() * out.multipliers).cwiseAbs().maxCoeff();
  return out;
}

}  // namespace remis::linalg
