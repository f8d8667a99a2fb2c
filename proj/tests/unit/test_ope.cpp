#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "remis/ope.hpp"
#include "remis/saddle.hpp"

using namespace remis;

namespace {

struct GridFixture {
  GridwalkEnv env = build_gridwalk();
  DistributionFamily fam = distribution_family(env.mdp, env.target, env.behavior, env.cfg);
  SAFunction q_pi = exact_q(env.mdp, env.target);
  SAFunction w_pi = weight_function(fam.d_pi, fam.d_D);
  double j_true = return_of(env.mdp, env.target);
  PopulationModel pop = population_mode(env.mdp, env.target, fam.d_D,
                                        initial_sa_dist(env.mdp, env.target));
};

}  // namespace

TEST_CASE("value-based estimate on hand examples") {
  const TabularMdp mdp = test::single_state_mdp(0.5);
  const Policy pol = test::trivial_policy(mdp);
  InitDataset init;
  init.s0 = {0, 0, 0};
  CHECK(j_q(SAFunction::Constant(1, 2.0), init, pol, 0.5) == doctest::Approx(1.0));
  CHECK(j_q(SAFunction::Zero(1), init, pol, 0.5) == 0.0);
}

TEST_CASE("weight-based estimate on hand examples") {
  const TabularMdp mdp = test::single_state_mdp(0.5);
  const Policy pol = test::trivial_policy(mdp);
  const StateActionDist delta(Vector::Ones(1));
  const Dataset data = sample_transitions(mdp, delta, 20, SeedSpec{2, 0});
  CHECK(j_w(SAFunction::Ones(1), data, pol) == doctest::Approx(1.0));
  CHECK(j_w(SAFunction::Zero(1), data, pol) == 0.0);
}

TEST_CASE("population identities: all three estimators equal the true return") {
  const GridFixture g;
  CHECK(std::abs(j_q_pop(g.q_pi, g.pop) - g.j_true) <= 1e-10);
  CHECK(std::abs(j_w_pop(g.w_pi, g.pop) - g.j_true) <= 1e-10);
  CHECK(std::abs(j_dr_pop(g.q_pi, g.w_pi, g.pop) - g.j_true) <= 1e-10);
}

TEST_CASE("double robustness against a wrong weight function") {
  const GridFixture g;
  test::Xoshiro256 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const SAFunction bad_w =
        g.w_pi + test::random_function(rng, g.env.mdp.sa_count(), 10.0);
    CHECK(std::abs(j_dr_pop(g.q_pi, bad_w, g.pop) - g.j_true) <= 1e-10);
  }
}

TEST_CASE("double robustness against a wrong value function") {
  const GridFixture g;
  test::Xoshiro256 rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    const SAFunction bad_q =
        g.q_pi + test::random_function(rng, g.env.mdp.sa_count(), 10.0);
    CHECK(std::abs(j_dr_pop(bad_q, g.w_pi, g.pop) - g.j_true) <= 1e-8);
  }
}

TEST_CASE("constant value shifts cancel exactly with the true weights") {
  const GridFixture g;
  for (const double c : {-1.0, 1.0}) {
    const SAFunction shifted = g.q_pi + SAFunction::Constant(g.env.mdp.sa_count(), c);
    CHECK(std::abs(j_dr_pop(shifted, g.w_pi, g.pop) - g.j_true) <= 1e-10);
  }
}

TEST_CASE("dropping the discount from the correction breaks the identity") {
  const GridFixture g;
  test::Xoshiro256 rng(23);
  const SAFunction bad_q = g.q_pi + test::random_function(rng, g.env.mdp.sa_count(), 5.0);
  const double literal = j_dr_pop(bad_q, g.w_pi, g.pop, /*literal_no_gamma=*/true);
  CHECK(std::abs(literal - g.j_true) > 1e-4);
}

TEST_CASE("sampled estimators are unbiased for their population counterparts") {
  const GridFixture g;
  test::Xoshiro256 rng(24);
  const SAFunction q_hat = g.q_pi + test::random_function(rng, g.env.mdp.sa_count(), 1.0);
  const SAFunction w_hat = g.w_pi + test::random_function(rng, g.env.mdp.sa_count(), 1.0);

  const double pop_q = j_q_pop(q_hat, g.pop);
  const double pop_w = j_w_pop(w_hat, g.pop);
  const double pop_dr = j_dr_pop(q_hat, w_hat, g.pop);

  const std::size_t n = 10000;
  const int replicates = 500;
  double sum_q = 0.0, sum_w = 0.0, sum_dr = 0.0;
  double sq_q = 0.0, sq_w = 0.0, sq_dr = 0.0;
  for (int rep = 0; rep < replicates; ++rep) {
    const SeedSpec seed{31337, static_cast<std::uint64_t>(rep)};
    const Dataset data = sample_transitions(g.env.mdp, g.fam.d_D, n, seed);
    const InitDataset init = sample_initial(g.env.mdp, n, seed);
    const double vq = j_q(q_hat, init, g.env.target, g.env.mdp.gamma);
    const double vw = j_w(w_hat, data, g.env.target);
    const double vdr = j_dr(q_hat, w_hat, data, init, g.env.target, g.env.mdp.gamma);
    sum_q += vq;
    sum_w += vw;
    sum_dr += vdr;
    sq_q += vq * vq;
    sq_w += vw * vw;
    sq_dr += vdr * vdr;
  }
  const auto check_mean = [&](double sum, double sq, double target) {
    const double mean = sum / replicates;
    const double var = sq / replicates - mean * mean;
    const double se = std::sqrt(var / replicates);
    CHECK(std::abs(mean - target) <= 4.0 * se + 1e-12);
  };
  check_mean(sum_q, sq_q, pop_q);
  check_mean(sum_w, sq_w, pop_w);
  check_mean(sum_dr, sq_dr, pop_dr);
}

TEST_CASE("ope_report packages the three estimates with their errors") {
  const GridFixture g;
  const Dataset data = sample_transitions(g.env.mdp, g.fam.d_D, 500, SeedSpec{3, 0});
  const InitDataset init = sample_initial(g.env.mdp, 500, SeedSpec{3, 0});
  const OpeReport rep =
      ope_report(g.q_pi, g.w_pi, data, init, g.env.target, g.env.mdp.gamma, g.j_true);
  CHECK(rep.err_q == doctest::Approx(std::abs(rep.j_q - g.j_true)));
  CHECK(rep.err_w == doctest::Approx(std::abs(rep.j_w - g.j_true)));
  CHECK(rep.err_dr == doctest::Approx(std::abs(rep.j_dr - g.j_true)));
}
