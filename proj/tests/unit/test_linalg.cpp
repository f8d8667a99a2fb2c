#include <doctest.h>

#include "oracles.hpp"
#include "remis/linalg.hpp"

using namespace remis;
using namespace remis::linalg;

TEST_CASE("solve_linear handles identity and diagonal systems") {
  Vector b(3);
  b << 1, 2, 3;
  const Vector x = solve_linear(Matrix::Identity(3, 3), b);
  CHECK((x - b).cwiseAbs().maxCoeff() == doctest::Approx(0.0).epsilon(1e-14));

  Matrix d(2, 2);
  d << 2, 0, 0, 4;
  Vector rhs(2);
  rhs << 2, 8;
  const Vector y = solve_linear(d, rhs);
  CHECK(y(0) == doctest::Approx(1.0));
  CHECK(y(1) == doctest::Approx(2.0));
}

TEST_CASE("solve_linear recovers a known solution on a random system") {
  test::Xoshiro256 rng(11);
  const Matrix a = test::random_matrix(rng, 20, 20) + 20.0 * Matrix::Identity(20, 20);
  const Vector x_star = test::random_function(rng, 20, 3.0);
  const Vector x = solve_linear(a, a * x_star);
  CHECK((x - x_star).cwiseAbs().maxCoeff() < 1e-8);
  // multiply-back residual
  CHECK((a * x - a * x_star).norm() < 1e-8);
}

TEST_CASE("solve_linear rejects singular input") {
  Matrix a(2, 2);
  a << 1, 2, 2, 4;
  Vector b(2);
  b << 1, 1;
  CHECK_THROWS_AS(solve_linear(a, b), SingularMatrix);
}

TEST_CASE("least_squares_min_norm picks the symmetric split") {
  Matrix a(1, 2);
  a << 1, 1;
  Vector b(1);
  b << 2;
  const Vector x = least_squares_min_norm(a, b);
  CHECK(x(0) == doctest::Approx(1.0));
  CHECK(x(1) == doctest::Approx(1.0));
}

TEST_CASE("least_squares_min_norm of a zero matrix is zero") {
  const Vector x = least_squares_min_norm(Matrix::Zero(4, 3), Vector::Ones(4));
  CHECK(x.norm() == 0.0);
}

TEST_CASE("least_squares_min_norm matches the SVD pseudo-inverse oracle") {
  test::Xoshiro256 rng(7);
  // rank-deficient 10x6: outer product of random factors with inner rank 3
  const Matrix a = test::random_matrix(rng, 10, 3) * test::random_matrix(rng, 3, 6);
  const Vector b = test::random_function(rng, 10, 2.0);
  const Vector mine = least_squares_min_norm(a, b);
  const Vector oracle = test::lstsq_via_pinv(a, b);
  CHECK((mine - oracle).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("least_squares_min_norm has the smallest norm among solutions") {
  test::Xoshiro256 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = test::random_matrix(rng, 4, 8);
    const Vector b = a * test::random_function(rng, 8, 1.0);  // consistent system
    const Vector x = least_squares_min_norm(a, b);
    const Matrix z = test::null_space_basis(a);
    for (int k = 0; k < 5; ++k) {
      const Vector other = x + z * test::random_function(rng, z.cols(), 1.0);
      CHECK(x.norm() <= other.norm() + 1e-12);
      CHECK((a * other - b).norm() < 1e-9);  // still a solution
    }
  }
}

TEST_CASE("equality QP: minimum norm point on a line") {
  Matrix h_mat = Matrix::Identity(2, 2);
  Matrix g_mat(1, 2);
  g_mat << 1, 1;
  Vector h(1);
  h << 2;
  const KktSolution sol = solve_equality_qp(h_mat, Vector::Zero(2), g_mat, h);
  CHECK(sol.primal(0) == doctest::Approx(1.0));
  CHECK(sol.primal(1) == doctest::Approx(1.0));
  CHECK(sol.multipliers(0) == doctest::Approx(-1.0));
  CHECK(sol.constraint_residual == doctest::Approx(0.0));
  CHECK(sol.stationarity_residual < 1e-12);
}

TEST_CASE("equality QP: single coordinate pin") {
  Matrix g_mat(1, 2);
  g_mat << 1, 0;
  Vector h(1);
  h << 1;
  const KktSolution sol = solve_equality_qp(Matrix::Identity(2, 2), Vector::Zero(2), g_mat, h);
  CHECK(sol.primal(0) == doctest::Approx(1.0));
  CHECK(sol.primal(1) == doctest::Approx(0.0));
}

TEST_CASE("equality QP matches the null-space oracle on random problems") {
  test::Xoshiro256 rng(2024);
  for (int trial = 0; trial < 25; ++trial) {
    const Index d = 9, k = 4;
    const Matrix h_mat = test::random_psd(rng, d, d);  // positive definite a.s.
    const Vector g = test::random_function(rng, d, 1.0);
    const Matrix g_mat = test::random_matrix(rng, k, d);
    const Vector h = g_mat * test::random_function(rng, d, 1.0);

    const KktSolution sol = solve_equality_qp(h_mat, g, g_mat, h);
    const Vector oracle = test::qp_via_null_space(h_mat, g, g_mat, h);

    const auto objective = [&](const Vector& x) {
      return 0.5 * x.dot(h_mat * x) - g.dot(x);
    };
    CHECK(objective(sol.primal) == doctest::Approx(objective(oracle)).epsilon(1e-7));
    // KKT conditions by direct arithmetic
    CHECK((g_mat * sol.primal - h).norm() < 1e-8);
    CHECK((h_mat * sol.primal - g + g_mat.transpose() * sol.multipliers)
              .cwiseAbs()
              .maxCoeff() < 1e-7);
  }
}

TEST_CASE("equality QP with singular Hessian returns the min-norm optimum") {
  test::Xoshiro256 rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    const Index d = 8, k = 3;
    const Matrix h_mat = test::random_psd(rng, d, 3);  // rank 3
    const Matrix root = test::random_matrix(rng, d, 3);
    const Vector g = h_mat * test::random_function(rng, d, 1.0);  // in range(H)
    const Matrix g_mat = test::random_matrix(rng, k, d);
    const Vector h = g_mat * test::random_function(rng, d, 1.0);

    const KktSolution sol = solve_equality_qp(h_mat, g, g_mat, h);
    CHECK(sol.degenerate_objective);  // null(H) and null(G) must intersect here
    CHECK((g_mat * sol.primal - h).norm() < 1e-8);
    // any other optimum (same objective, feasible) is at least as long
    const Vector oracle = test::qp_via_null_space(h_mat, g, g_mat, h);
    CHECK(sol.primal.norm() <= oracle.norm() + 1e-9);
  }
}

TEST_CASE("equality QP reports infeasibility through the residual") {
  // Two contradictory constraints on one coordinate.
  Matrix g_mat(2, 2);
  g_mat << 1, 0, 1, 0;
  Vector h(2);
  h << 1, 3;
  const KktSolution sol =
      solve_equality_qp(Matrix::Identity(2, 2), Vector::Zero(2), g_mat, h);
  CHECK(sol.constraint_residual > 0.1);
  CHECK(sol.rank_constraints == 1);
  // solved against the projection: G x = projection of h onto range(G)
  CHECK(sol.primal(0) == doctest::Approx(2.0));
}

TEST_CASE("equality QP with no constraints reduces to the unconstrained minimum") {
  Matrix h_mat(2, 2);
  h_mat << 2, 0, 0, 4;
  Vector g(2);
  g << 2, 8;
  const KktSolution sol = solve_equality_qp(h_mat, g, Matrix::Zero(0, 2), Vector(0));
  CHECK(sol.primal(0) == doctest::Approx(1.0));
  CHECK(sol.primal(1) == doctest::Approx(2.0));
  CHECK(sol.multipliers.size() == 0);
}

TEST_CASE("LuSolver reuses one factorization across right-hand sides") {
  test::Xoshiro256 rng(5);
  const Matrix a = test::random_matrix(rng, 15, 15) + 15.0 * Matrix::Identity(15, 15);
  const LuSolver lu(a);
  for (int k = 0; k < 4; ++k) {
    const Vector b = test::random_function(rng, 15, 1.0);
    CHECK((a * lu.solve(b) - b).norm() < 1e-10);
  }
  CHECK_THROWS_AS(LuSolver(Matrix::Zero(3, 3)), SingularMatrix);
}
