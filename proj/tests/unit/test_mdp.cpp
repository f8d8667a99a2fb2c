#include <doctest.h>

#include <sstream>

#include "oracles.hpp"
#include "remis/gridwalk.hpp"
#include "remis/mdp.hpp"
#include "remis/mdp_io.hpp"

using namespace remis;

TEST_CASE("transition operator on degenerate chains") {
  const TabularMdp single = test::single_state_mdp();
  const Policy pol1 = test::trivial_policy(single);
  const Matrix p1 = transition_matrix(single, pol1);
  CHECK(p1.rows() == 1);
  CHECK(p1(0, 0) == doctest::Approx(1.0));

  const TabularMdp chain = test::chain_mdp();
  const Matrix p2 = transition_matrix(chain, test::trivial_policy(chain));
  CHECK(p2(0, 0) == 0.0);
  CHECK(p2(0, 1) == doctest::Approx(1.0));
  CHECK(p2(1, 0) == 0.0);
  CHECK(p2(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("transition operator rows are stochastic on Gridwalk") {
  const GridwalkEnv env = build_gridwalk();
  const Matrix p = transition_matrix(env.mdp, env.target);
  for (Index row = 0; row < p.rows(); ++row)
    CHECK(std::abs(p.row(row).sum() - 1.0) <= 1e-10);
}

TEST_CASE("exact_q on hand-solvable fixtures") {
  const TabularMdp single = test::single_state_mdp(0.5);
  const SAFunction q1 = exact_q(single, test::trivial_policy(single));
  CHECK(q1(0) == doctest::Approx(2.0).epsilon(1e-12));

  const TabularMdp chain = test::chain_mdp(0.5);
  const SAFunction q2 = exact_q(chain, test::trivial_policy(chain));
  CHECK(q2(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(q2(1) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("exact_q matches a long value-iteration oracle on Gridwalk") {
  const GridwalkEnv env = build_gridwalk();
  const SAFunction q = exact_q(env.mdp, env.target);
  const SAFunction q_vi = test::value_iteration_q(env.mdp, env.target, 10000);
  CHECK((q - q_vi).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("bellman_backup fixed point and base cases") {
  const GridwalkEnv env = build_gridwalk();
  const SAFunction q = exact_q(env.mdp, env.target);
  CHECK((bellman_backup(env.mdp, env.target, q) - q).cwiseAbs().maxCoeff() < 1e-9);

  const SAFunction zero = SAFunction::Zero(env.mdp.sa_count());
  const SAFunction backed = bellman_backup(env.mdp, env.target, zero);
  for (Index s = 0; s < env.mdp.n_states; ++s)
    for (Index a = 0; a < env.mdp.n_actions; ++a)
      CHECK(backed(sa_index(s, a, env.mdp.n_actions)) ==
            doctest::Approx(env.mdp.mean_reward(s, a)));
}

TEST_CASE("bellman_backup agrees with the loop oracle on random input") {
  const GridwalkEnv env = build_gridwalk();
  test::Xoshiro256 rng(3);
  const SAFunction q = test::random_function(rng, env.mdp.sa_count(), 10.0);
  const SAFunction mine = bellman_backup(env.mdp, env.target, q);
  const SAFunction oracle = test::loop_bellman_backup(env.mdp, env.target, q);
  CHECK((mine - oracle).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("occupancy on fixtures and the flow equation") {
  const TabularMdp single = test::single_state_mdp();
  const Policy pol = test::trivial_policy(single);
  const StateActionDist delta(Vector::Ones(1));
  CHECK(occupancy(single, pol, delta).weights(0) == doctest::Approx(1.0));

  const TabularMdp chain = test::chain_mdp(0.5);
  Vector init = Vector::Zero(2);
  init(0) = 1.0;
  const StateActionDist d = occupancy(chain, test::trivial_policy(chain),
                                      StateActionDist(init));
  CHECK(d.weights(0) == doctest::Approx(0.5));
  CHECK(d.weights(1) == doctest::Approx(0.5));
}

TEST_CASE("occupancy satisfies the flow equation on Gridwalk") {
  const GridwalkEnv env = build_gridwalk();
  const StateActionDist mu0_pi = initial_sa_dist(env.mdp, env.target);
  const StateActionDist d = occupancy(env.mdp, env.target, mu0_pi);
  const Matrix p = transition_matrix(env.mdp, env.target);
  const Vector flow = d.weights - ((1.0 - env.mdp.gamma) * mu0_pi.weights +
                                   env.mdp.gamma * p.transpose() * d.weights);
  CHECK(flow.cwiseAbs().maxCoeff() <= 1e-8);
  CHECK(std::abs(d.weights.sum() - 1.0) <= 1e-8);
  // flow positivity: d dominates (1-gamma) * init elementwise
  CHECK(((d.weights - (1.0 - env.mdp.gamma) * mu0_pi.weights).minCoeff()) >= -1e-12);
}

TEST_CASE("flow positivity holds for random initial distributions") {
  const GridwalkEnv env = build_gridwalk();
  test::Xoshiro256 rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    const StateActionDist init = test::random_dist(rng, env.mdp.sa_count());
    const StateActionDist d = occupancy(env.mdp, env.target, init);
    CHECK((d.weights - (1.0 - env.mdp.gamma) * init.weights).minCoeff() >= -1e-12);
  }
}

TEST_CASE("initial_sa_dist shapes") {
  const TabularMdp chain = test::chain_mdp();
  const StateActionDist d1 = initial_sa_dist(chain, test::trivial_policy(chain));
  CHECK(d1.weights(0) == doctest::Approx(1.0));  // deterministic start, one action

  TabularMdp two = test::chain_mdp();
  two.mu0 << 0.5, 0.5;
  two.n_actions = 2;
  two.transition.assign(2, two.transition[0]);
  two.mean_reward = Matrix::Zero(2, 2);
  two.mean_reward.col(0) << 0.0, 1.0;
  two.mean_reward.col(1) << 0.0, 1.0;
  Policy uniform;
  uniform.probs = Matrix::Constant(2, 2, 0.5);
  const StateActionDist d2 = initial_sa_dist(two, uniform);
  for (Index i = 0; i < 4; ++i) CHECK(d2.weights(i) == doctest::Approx(0.25));
}

TEST_CASE("initial_sa_dist support on Gridwalk is the upper half") {
  const GridwalkEnv env = build_gridwalk();
  const StateActionDist d = initial_sa_dist(env.mdp, env.target);
  Index support = 0;
  for (Index i = 0; i < d.size(); ++i)
    if (d.weights(i) > 0.0) ++support;
  CHECK(support == 50);  // 5 upper rows x 10 columns, deterministic policy
}

TEST_CASE("weight_function basics") {
  const StateActionDist d_D(Vector::Constant(2, 0.5));
  Vector w1(2);
  w1 << 0.5, 0.5;
  CHECK((weight_function(StateActionDist(w1), d_D) - Vector::Ones(2)).norm() == 0.0);

  Vector point(2);
  point << 1.0, 0.0;
  const SAFunction ratio = weight_function(StateActionDist(point), d_D);
  CHECK(ratio(0) == doctest::Approx(2.0));
  CHECK(ratio(1) == doctest::Approx(0.0));

  Vector degenerate(2);
  degenerate << 1.0, 0.0;
  CHECK_THROWS_AS(weight_function(d_D, StateActionDist(degenerate)), ZeroDenominator);
}

TEST_CASE("weight_function normalizes against the data distribution on Gridwalk") {
  const GridwalkEnv env = build_gridwalk();
  const DistributionFamily fam =
      distribution_family(env.mdp, env.target, env.behavior, env.cfg);
  const SAFunction w = weight_function(fam.d_pi, fam.d_D);
  CHECK(std::abs(fam.d_D.weights.dot(w) - 1.0) <= 1e-8);
}

TEST_CASE("return_of on fixtures and the equivalence identity") {
  const TabularMdp single = test::single_state_mdp();
  CHECK(return_of(single, test::trivial_policy(single)) == doctest::Approx(1.0).epsilon(1e-12));

  const TabularMdp chain = test::chain_mdp(0.5);
  CHECK(return_of(chain, test::trivial_policy(chain)) == doctest::Approx(0.5).epsilon(1e-12));

  const GridwalkEnv env = build_gridwalk();
  const SAFunction q = exact_q(env.mdp, env.target);
  const StateActionDist mu0_pi = initial_sa_dist(env.mdp, env.target);
  const StateActionDist d_pi = occupancy(env.mdp, env.target, mu0_pi);
  Vector r(env.mdp.sa_count());
  for (Index s = 0; s < env.mdp.n_states; ++s)
    for (Index a = 0; a < env.mdp.n_actions; ++a)
      r(sa_index(s, a, env.mdp.n_actions)) = env.mdp.mean_reward(s, a);
  const double via_q = (1.0 - env.mdp.gamma) * mu0_pi.weights.dot(q);
  const double via_d = d_pi.weights.dot(r);
  CHECK(std::abs(via_q - via_d) <= 1e-8);
  CHECK(return_of(env.mdp, env.target) == doctest::Approx(via_q));
  CHECK(via_q > 0.0);
  CHECK(via_q < 1.0);
}

TEST_CASE("mdp text serialization round-trips exactly") {
  const GridwalkEnv env = build_gridwalk(GridwalkConfig{.width = 4, .height = 4});
  std::stringstream buf;
  save_mdp(buf, env.mdp);
  const TabularMdp loaded = load_mdp(buf);
  CHECK(loaded.n_states == env.mdp.n_states);
  CHECK(loaded.gamma == env.mdp.gamma);
  CHECK((loaded.mu0 - env.mdp.mu0).norm() == 0.0);
  CHECK((loaded.mean_reward - env.mdp.mean_reward).norm() == 0.0);
  for (Index a = 0; a < env.mdp.n_actions; ++a)
    CHECK((loaded.transition[a] - env.mdp.transition[a]).norm() == 0.0);
}

TEST_CASE("validation rejects malformed inputs") {
  TabularMdp bad = test::chain_mdp();
  bad.gamma = 1.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  bad = test::chain_mdp();
  bad.transition[0](0, 1) = 0.7;
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  bad = test::chain_mdp();
  bad.mean_reward(1, 0) = 1.5;
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  Vector w(2);
  w << 0.7, 0.7;
  CHECK_THROWS_AS(StateActionDist{w}, ConfigError);
}
