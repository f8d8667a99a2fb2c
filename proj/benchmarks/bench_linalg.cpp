#include <benchmark/benchmark.h>

#include "remis/linalg.hpp"
#include "remis/rng.hpp"

namespace {

using namespace remis;

Matrix well_conditioned(Xoshiro256& rng, Index n) {
  Matrix a(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) a(i, j) = 2.0 * rng.next_double() - 1.0;
  a += static_cast<double>(n) * Matrix::Identity(n, n);
  return a;
}

void SolveLinear(benchmark::State& state) {
  Xoshiro256 rng(1);
  const Index n = state.range(0);
  const Matrix a = well_conditioned(rng, n);
  Vector b(n);
  for (Index i = 0; i < n; ++i) b(i) = rng.next_double();
  for (auto _ : state) {
    Vector x = linalg::solve_linear(a, b);
    benchmark::DoNotOptimize(x);
  }
  state.SetComplexityN(n);
}
BENCHMARK(SolveLinear)->RangeMultiplier(2)->Range(50, 400)->Complexity();

void EqualityQp(benchmark::State& state) {
  Xoshiro256 rng(2);
  const Index d = state.range(0), k = 10;
  Matrix root(d, d / 2);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d / 2; ++j) root(i, j) = 2.0 * rng.next_double() - 1.0;
  const Matrix h_mat = root * root.transpose();
  Vector g(d);
  Matrix g_mat(k, d);
  Vector h(k);
  for (Index i = 0; i < d; ++i) g(i) = rng.next_double();
  for (Index i = 0; i < k; ++i) {
    h(i) = rng.next_double();
    for (Index j = 0; j < d; ++j) g_mat(i, j) = 2.0 * rng.next_double() - 1.0;
  }
  for (auto _ : state) {
    auto sol = linalg::solve_equality_qp(h_mat, g, g_mat, h);
    benchmark::DoNotOptimize(sol.primal);
  }
  state.SetComplexityN(d);
}
BENCHMARK(EqualityQp)->RangeMultiplier(2)->Range(32, 256)->Complexity();

void MinNormLeastSquares(benchmark::State& state) {
  Xoshiro256 rng(3);
  const Index m = 10, n = state.range(0);
  Matrix a(m, n);
  Vector b(m);
  for (Index i = 0; i < m; ++i) {
    b(i) = rng.next_double();
    for (Index j = 0; j < n; ++j) a(i, j) = 2.0 * rng.next_double() - 1.0;
  }
  for (auto _ : state) {
    Vector x = linalg::least_squares_min_norm(a, b);
    benchmark::DoNotOptimize(x);
  }
}
BENCHMARK(MinNormLeastSquares)->RangeMultiplier(4)->Range(16, 1024);

}  // namespace
