#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "remis/experiments.hpp"

using namespace remis;

namespace {

std::string csv_of(const ExperimentResult& result) {
  std::stringstream buf;
  write_rows_csv(buf, result.rows, result.truncated);
  return buf.str();
}

ExperimentConfig small_reg_sweep() {
  ExperimentConfig cfg;
  cfg.experiment = ExperimentKind::Fig1;
  cfg.sample_sizes = {125, 250, 500};
  cfg.n_runs = 10;
  cfg.master_seed = 99;
  return cfg;
}

}  // namespace

TEST_CASE("row count equals the declared cartesian product") {
  const ExperimentConfig cfg = small_reg_sweep();
  const ExperimentResult result = run_reg_sweep(cfg, 1);
  // 6 regularizers x 5 evaluation distributions x 3 sizes x 10 runs
  std::size_t error_rows = 0, return_rows = 0;
  for (const ResultRow& row : result.rows)
    (row.eval_dist == "return" ? return_rows : error_rows) += 1;
  CHECK(error_rows == 900);
  CHECK(return_rows == 6 * 3 * 10);
}

TEST_CASE("identical configuration and seed give identical CSV bytes") {
  const ExperimentConfig cfg = small_reg_sweep();
  const std::string first = csv_of(run_reg_sweep(cfg, 1));
  const std::string second = csv_of(run_reg_sweep(cfg, 1));
  CHECK(first == second);
}

TEST_CASE("thread count cannot change the output") {
  ExperimentConfig cfg = small_reg_sweep();
  cfg.sample_sizes = {125, 250};
  cfg.n_runs = 6;
  const std::string serial = csv_of(run_reg_sweep(cfg, 1));
  const std::string parallel = csv_of(run_reg_sweep(cfg, 4));
  CHECK(serial == parallel);
}

TEST_CASE("each row is reproducible from its seed and condition alone") {
  ExperimentConfig cfg = small_reg_sweep();
  cfg.sample_sizes = {250};
  cfg.n_runs = 3;
  cfg.reg_distributions = {"U", "none"};
  cfg.eval_distributions = {"p"};
  const ExperimentResult result = run_reg_sweep(cfg, 2);

  const Workspace ws = build_workspace(cfg.gridwalk, cfg.feature_decimals, false);
  for (const ResultRow& row : result.rows) {
    if (row.eval_dist == "return") continue;
    const Dataset data = sample_transitions(ws.env.mdp, ws.family.d_D, row.n,
                                            SeedSpec{row.seed, 0});
    const ConstraintSystem sys =
        build_q_system(data, ws.primal, ws.disc_ratio, ws.env.target, ws.env.mdp.gamma);
    const QEstimate est =
        row.reg_dist == "none"
            ? solve_unregularized(sys, ws.primal)
            : solve_regularized(sys, ws.primal,
                                quadratic(SAFunction::Zero(ws.env.mdp.sa_count())),
                                ws.family.by_name(row.reg_dist));
    const double err =
        weighted_l2_error(est.values, ws.q_pi, ws.family.by_name(row.eval_dist));
    CHECK(err == doctest::Approx(row.error).epsilon(1e-12));
  }
}

TEST_CASE("rate summary reproduces synthetic decay slopes") {
  // regression sanity on the slope fit itself
  std::vector<double> ns = {125, 250, 500, 1000, 2000, 4000, 8000};
  std::vector<double> decays, flats;
  for (double n : ns) {
    decays.push_back(3.0 * std::pow(n, -0.25));
    flats.push_back(0.7);
  }
  CHECK(loglog_slope(ns, decays) == doctest::Approx(-0.25).epsilon(1e-6));
  CHECK(loglog_slope(ns, flats) == doctest::Approx(0.0));
}

TEST_CASE("rate experiment emits per-size medians and a fitted slope") {
  ExperimentConfig cfg;
  cfg.experiment = ExperimentKind::Rate;
  cfg.sample_sizes = {125, 250, 500, 1000};
  cfg.n_runs = 8;
  cfg.master_seed = 5;
  const ExperimentResult result = run_rate(cfg, 2);
  CHECK(result.summary.count("loglog_slope") == 1);
  for (std::size_t n : cfg.sample_sizes)
    CHECK(result.summary.count("median_n" + std::to_string(n)) == 1);
}

TEST_CASE("model sweep rows carry the model grid and baseline") {
  ExperimentConfig cfg;
  cfg.experiment = ExperimentKind::Fig2;
  cfg.sample_sizes = {200};
  cfg.n_runs = 4;
  cfg.master_seed = 31;
  cfg.reg_distributions = {"U"};
  cfg.eval_distributions = {"U"};
  cfg.m_grid = {0.5, 1.0};
  const ExperimentResult result = run_model_sweep(cfg, 2);

  std::size_t est_rows = 0, model_rows = 0;
  for (const ResultRow& row : result.rows) {
    CHECK(row.m.has_value());
    if (row.reg_dist == "model")
      ++model_rows;
    else
      ++est_rows;
  }
  CHECK(est_rows == 2 * 4);   // m values x runs
  CHECK(model_rows == 2);     // one deterministic baseline per m

  // at m = 1 the anchor is exact, so both the estimator and the baseline
  // sit at zero error
  for (const ResultRow& row : result.rows)
    if (row.m == 1.0) CHECK(row.error <= 1e-10);
}

TEST_CASE("ope compare emits return errors and slopes per condition") {
  ExperimentConfig cfg;
  cfg.experiment = ExperimentKind::OpeCompare;
  cfg.sample_sizes = {125, 250};
  cfg.n_runs = 4;
  cfg.master_seed = 13;
  cfg.reg_distributions = {"U", "none"};
  const ExperimentResult result = run_ope_compare(cfg, 2);
  CHECK(result.rows.size() == 2 * 2 * 4);
  for (const ResultRow& row : result.rows) {
    CHECK(row.return_error_q.has_value());
    CHECK(row.return_error_w.has_value());
    CHECK(row.return_error_dr.has_value());
    CHECK(row.error >= 0.0);
  }
  CHECK(result.summary.count("slope_q_U") == 1);
  CHECK(result.summary.count("slope_dr_none") == 1);
}

TEST_CASE("csv header and metadata shape") {
  ExperimentConfig cfg = small_reg_sweep();
  cfg.sample_sizes = {125};
  cfg.n_runs = 1;
  cfg.reg_distributions = {"U"};
  cfg.eval_distributions = {"U"};
  const ExperimentResult result = run_reg_sweep(cfg, 1);
  const std::string csv = csv_of(result);
  CHECK(csv.rfind("experiment,replicate,n,n0,reg_dist,eval_dist,m,masked,error,"
                  "return_error_q,return_error_w,return_error_dr,constraint_residual,seed\n",
                  0) == 0);

  std::stringstream meta;
  write_metadata_json(meta, {{"experiment", {{"kind", "fig1"}}}}, result);
  const std::string meta_str = meta.str();
  CHECK(meta_str.find("rng_algorithm") != std::string::npos);
  CHECK(meta_str.find("tool_version") != std::string::npos);
  CHECK(meta_str.find("row_count") != std::string::npos);
}

TEST_CASE("statistics helpers behave") {
  CHECK(median({3.0, 1.0, 2.0}) == 2.0);
  CHECK(median({4.0, 1.0, 2.0, 3.0}) == doctest::Approx(2.5));

  std::vector<double> xs = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<double> ys, inverted;
  for (double x : xs) {
    ys.push_back(2.0 * x + 1.0);
    inverted.push_back(-x);
  }
  CHECK(spearman(xs, ys) == doctest::Approx(1.0));
  CHECK(spearman(xs, inverted) == doctest::Approx(-1.0));

  const auto [lo, hi] = bootstrap_median_ci({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, 500, 7);
  CHECK(lo <= 5.5);
  CHECK(hi >= 5.5);
  const auto [lo2, hi2] = bootstrap_median_ci({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, 500, 7);
  CHECK(lo == lo2);  // deterministic given the seed
  CHECK(hi == hi2);
}

TEST_CASE("config validation rejects malformed sweeps") {
  ExperimentConfig cfg;
  cfg.sample_sizes = {};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = ExperimentConfig{};
  cfg.sample_sizes = {500, 250};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = ExperimentConfig{};
  cfg.n_runs = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = ExperimentConfig{};
  cfg.experiment = ExperimentKind::Fig2;
  cfg.m_grid = {1.5};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
