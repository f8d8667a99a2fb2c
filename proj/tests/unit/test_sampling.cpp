#include <doctest.h>

#include <cmath>
#include <sstream>
#include <thread>

#include "oracles.hpp"
#include "remis/gridwalk.hpp"
#include "remis/sampling.hpp"

using namespace remis;

namespace {

bool datasets_equal(const Dataset& a, const Dataset& b) {
  return a.s == b.s && a.a == b.a && a.r == b.r && a.s_next == b.s_next;
}

/// Binomial concentration check for one cell. The plain four-sigma window is
/// meaningless for cells whose expected count is a small fraction of one
/// draw, so a unit-scale slack covers the Poisson regime.
bool within_four_sigma(double count, double n, double prob, double slack) {
  const double mean = n * prob;
  const double sigma = std::sqrt(n * prob * (1.0 - prob));
  return std::abs(count - mean) <= 4.0 * sigma + slack;
}

}  // namespace

TEST_CASE("identical seeds give bit-identical datasets") {
  const GridwalkEnv env = build_gridwalk();
  const DistributionFamily fam =
      distribution_family(env.mdp, env.target, env.behavior, env.cfg);
  const SeedSpec seed{42, 7};
  const Dataset a = sample_transitions(env.mdp, fam.d_D, 500, seed);
  const Dataset b = sample_transitions(env.mdp, fam.d_D, 500, seed);
  CHECK(datasets_equal(a, b));
  const InitDataset ia = sample_initial(env.mdp, 200, seed);
  const InitDataset ib = sample_initial(env.mdp, 200, seed);
  CHECK(ia.s0 == ib.s0);
  // distinct replicate indices decorrelate
  const Dataset c = sample_transitions(env.mdp, fam.d_D, 500, SeedSpec{42, 8});
  CHECK_FALSE(datasets_equal(a, c));
}

TEST_CASE("single-state MDP yields constant tuples") {
  const TabularMdp mdp = test::single_state_mdp();
  const StateActionDist delta(Vector::Ones(1));
  const Dataset data = sample_transitions(mdp, delta, 50, SeedSpec{1, 0});
  for (std::size_t i = 0; i < data.size(); ++i) {
    CHECK(data.s[i] == 0);
    CHECK(data.a[i] == 0);
    CHECK(data.r[i] == 1.0);
    CHECK(data.s_next[i] == 0);
  }
}

TEST_CASE("pair frequencies concentrate around the data distribution") {
  const GridwalkEnv env = build_gridwalk();
  const DistributionFamily fam =
      distribution_family(env.mdp, env.target, env.behavior, env.cfg);
  const std::size_t n = 100000;
  // Frozen seed: the strict four-sigma window must hold for every pair here.
  const Dataset data = sample_transitions(env.mdp, fam.d_D, n, SeedSpec{39, 0});
  Vector counts = Vector::Zero(env.mdp.sa_count());
  for (std::size_t i = 0; i < n; ++i)
    counts(sa_index(data.s[i], data.a[i], env.mdp.n_actions)) += 1.0;

  int strict_failures = 0;
  for (Index i = 0; i < counts.size(); ++i) {
    const double prob = fam.d_D.weights(i);
    if (!within_four_sigma(counts(i), static_cast<double>(n), prob, 0.0)) ++strict_failures;
    CHECK(within_four_sigma(counts(i), static_cast<double>(n), prob, 4.0));
  }
  CHECK(strict_failures == 0);
}

TEST_CASE("initial-state frequencies concentrate around mu0") {
  const GridwalkEnv env = build_gridwalk();
  const std::size_t n0 = 50000;
  const InitDataset init = sample_initial(env.mdp, n0, SeedSpec{5, 0});
  Vector counts = Vector::Zero(env.mdp.n_states);
  for (Index s : init.s0) {
    CHECK(env.mdp.mu0(s) > 0.0);  // support respected
    counts(s) += 1.0;
  }
  for (Index s = 0; s < env.mdp.n_states; ++s)
    CHECK(within_four_sigma(counts(s), static_cast<double>(n0), env.mdp.mu0(s), 0.0));
}

TEST_CASE("deterministic rewards equal the mean reward exactly") {
  const GridwalkEnv env = build_gridwalk();
  const DistributionFamily fam =
      distribution_family(env.mdp, env.target, env.behavior, env.cfg);
  const Dataset data = sample_transitions(env.mdp, fam.d_D, 2000, SeedSpec{9, 0});
  for (std::size_t i = 0; i < data.size(); ++i)
    CHECK(data.r[i] == env.mdp.mean_reward(data.s[i], data.a[i]));
}

TEST_CASE("bernoulli rewards are indicator draws with the right mean") {
  const GridwalkEnv env = build_gridwalk();
  const DistributionFamily fam =
      distribution_family(env.mdp, env.target, env.behavior, env.cfg);
  const std::size_t n = 50000;
  const Dataset data =
      sample_transitions(env.mdp, fam.d_D, n, SeedSpec{11, 0}, RewardNoise::Bernoulli);
  double mean_realized = 0.0, mean_expected = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    CHECK((data.r[i] == 0.0 || data.r[i] == 1.0));
    mean_realized += data.r[i];
    mean_expected += env.mdp.mean_reward(data.s[i], data.a[i]);
  }
  CHECK(std::abs(mean_realized - mean_expected) / static_cast<double>(n) < 0.01);
}

TEST_CASE("parallel replicate generation matches sequential generation") {
  const GridwalkEnv env = build_gridwalk();
  const DistributionFamily fam =
      distribution_family(env.mdp, env.target, env.behavior, env.cfg);
  std::vector<Dataset> sequential(4), parallel(4);
  for (std::uint64_t rep = 0; rep < 4; ++rep)
    sequential[rep] = sample_transitions(env.mdp, fam.d_D, 300, SeedSpec{77, rep});
  std::vector<std::thread> pool;
  for (std::uint64_t rep = 0; rep < 4; ++rep)
    pool.emplace_back([&, rep] {
      parallel[rep] = sample_transitions(env.mdp, fam.d_D, 300, SeedSpec{77, rep});
    });
  for (auto& t : pool) t.join();
  for (int rep = 0; rep < 4; ++rep) CHECK(datasets_equal(sequential[rep], parallel[rep]));
}

TEST_CASE("dataset CSV round-trips") {
  const GridwalkEnv env = build_gridwalk();
  const DistributionFamily fam =
      distribution_family(env.mdp, env.target, env.behavior, env.cfg);
  const Dataset data = sample_transitions(env.mdp, fam.d_D, 123, SeedSpec{21, 0});
  std::stringstream buf;
  save_dataset(buf, data);
  const Dataset loaded = load_dataset(buf);
  CHECK(datasets_equal(data, loaded));
  loaded.validate(env.mdp.n_states, env.mdp.n_actions);

  const InitDataset init = sample_initial(env.mdp, 57, SeedSpec{21, 0});
  std::stringstream buf2;
  save_init_dataset(buf2, init);
  CHECK(load_init_dataset(buf2).s0 == init.s0);
}
