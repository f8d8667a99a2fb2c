// Command-line front end: builds environments, samples data, runs single
// estimations, experiment sweeps, and an invariant check battery.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <atomic>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "remis/config.hpp"
#include "remis/diagnostics.hpp"
#include "remis/experiments.hpp"
#include "remis/mdp_io.hpp"
#include "remis/ope.hpp"
#include "remis/regularizer.hpp"
#include "remis/saddle.hpp"
#include "remis/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::atomic<bool> g_interrupted{false};

void handle_interrupt(int) { g_interrupted.store(true); }

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  int threads = 0;
};

remis::IniMap load_config(const CommonArgs& args) {
  remis::IniMap ini;
  if (!args.config_path.empty()) ini = remis::parse_ini_file(args.config_path);
  remis::apply_overrides(ini, args.overrides);
  if (args.seed) ini["experiment"]["master_seed"] = std::to_string(*args.seed);
  return ini;
}

fs::path ensure_out_dir(const CommonArgs& args) {
  fs::path dir(args.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw remis::ConfigError("cannot create output directory: " + dir.string());
  return dir;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_sa_csv(const fs::path& path, const remis::SAFunction& values, remis::Index n_actions) {
  std::ofstream os(path);
  if (!os) throw remis::ConfigError("cannot open for writing: " + path.string());
  os << "s,a,value\n";
  for (remis::Index i = 0; i < values.size(); ++i)
    os << i / n_actions << "," << i % n_actions << "," << fmt(values(i)) << "\n";
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream os(path);
  if (!os) throw remis::ConfigError("cannot open for writing: " + path.string());
  os << j.dump(2) << "\n";
}

remis::SAFunction anchor_from_config(const remis::ToolConfig& tool, const remis::Workspace& ws) {
  if (tool.anchor == "zero") return remis::SAFunction::Zero(ws.env.mdp.sa_count());
  if (tool.anchor == "exact_q") return ws.q_pi;
  return remis::uniform_model(ws.q_pi, tool.model_m, ws.family.p, tool.model_masked,
                              tool.support_average);
}

int cmd_exact_fixture(const remis::ToolConfig& tool, const fs::path& dir) {
  // Fixture mode: exact solvers for a serialized MDP under the uniform
  // policy, with the data distribution equal to its own occupancy.
  const remis::TabularMdp mdp = remis::load_mdp(tool.exact_mdp_file);
  remis::Policy pol;
  pol.probs = remis::Matrix::Constant(mdp.n_states, mdp.n_actions,
                                      1.0 / static_cast<double>(mdp.n_actions));
  const remis::SAFunction q = remis::exact_q(mdp, pol);
  const remis::StateActionDist mu0_pi = remis::initial_sa_dist(mdp, pol);
  const remis::StateActionDist d_pi = remis::occupancy(mdp, pol, mu0_pi);
  const remis::SAFunction w = remis::weight_function(d_pi, d_pi);

  write_sa_csv(dir / "q_pi.csv", q, mdp.n_actions);
  write_sa_csv(dir / "d_pi.csv", d_pi.weights, mdp.n_actions);
  write_sa_csv(dir / "w_pi.csv", w, mdp.n_actions);

  json scalars;
  scalars["J"] = remis::return_of(mdp, pol);
  scalars["tool_version"] = remis::kVersion;
  write_json(dir / "scalars.json", scalars);
  std::cout << "exact: J = " << fmt(scalars["J"].get<double>()) << ", outputs in "
            << dir.string() << "\n";
  return 0;
}

int cmd_exact(const CommonArgs& args) {
  const remis::IniMap ini = load_config(args);
  const remis::ToolConfig tool = remis::tool_config_from(ini);
  const fs::path dir = ensure_out_dir(args);
  if (!tool.exact_mdp_file.empty()) return cmd_exact_fixture(tool, dir);
  const remis::GridwalkConfig gw = remis::gridwalk_config_from(ini);

  const remis::Workspace ws = remis::build_workspace(gw, tool.feature_decimals);
  const remis::Index A = ws.env.mdp.n_actions;

  write_sa_csv(dir / "q_pi.csv", ws.q_pi, A);
  write_sa_csv(dir / "d_pi.csv", ws.family.d_pi.weights, A);
  write_sa_csv(dir / "w_pi.csv", ws.w_pi, A);

  const remis::StateActionDist& nu = ws.family.by_name(tool.exact_nu);
  const remis::StateActionDist& eta = ws.family.by_name(tool.exact_eta);
  const remis::SaddleReport wrep =
      remis::w_star(ws.env.mdp, ws.env.target, nu, ws.q_pi, ws.family.d_D);
  const remis::SaddleReport qrep =
      remis::q_star(ws.env.mdp, ws.env.target, eta, ws.w_pi, ws.family.d_D);
  write_sa_csv(dir / "w_star.csv", wrep.dual, A);
  write_sa_csv(dir / "q_star.csv", qrep.dual, A);

  json scalars;
  scalars["J"] = ws.j_true;
  scalars["w_star_sup_norm"] = wrep.sup_norm;
  scalars["w_star_coverage_bound"] = *wrep.coverage_bound;
  scalars["w_star_stationarity_residual"] = wrep.stationarity_residual;
  scalars["q_star_sup_norm"] = qrep.sup_norm;
  scalars["q_star_stationarity_residual"] = qrep.stationarity_residual;
  scalars["nu"] = tool.exact_nu;
  scalars["eta"] = tool.exact_eta;
  scalars["tool_version"] = remis::kVersion;
  write_json(dir / "scalars.json", scalars);

  remis::save_mdp((dir / "mdp.txt").string(), ws.env.mdp);
  std::cout << "exact: J = " << fmt(ws.j_true) << ", outputs in " << dir.string() << "\n";
  return 0;
}

int cmd_sample(const CommonArgs& args) {
  const remis::IniMap ini = load_config(args);
  const remis::GridwalkConfig gw = remis::gridwalk_config_from(ini);
  const remis::ToolConfig tool = remis::tool_config_from(ini);
  const remis::ExperimentConfig ecfg = remis::experiment_config_from(ini);
  const fs::path dir = ensure_out_dir(args);

  const remis::GridwalkEnv env = remis::build_gridwalk(gw);
  const remis::DistributionFamily family =
      remis::distribution_family(env.mdp, env.target, env.behavior, gw);

  const remis::SeedSpec seed{ecfg.master_seed, 0};
  const remis::Dataset data =
      remis::sample_transitions(env.mdp, family.d_D, tool.sample_n, seed, ecfg.reward_noise);
  const remis::InitDataset init = remis::sample_initial(env.mdp, tool.sample_n0, seed);
  remis::save_dataset((dir / "dataset.csv").string(), data);
  remis::save_init_dataset((dir / "init_dataset.csv").string(), init);

  json meta;
  meta["n"] = data.size();
  meta["n0"] = init.size();
  meta["master_seed"] = ecfg.master_seed;
  meta["rng_algorithm"] = remis::kRngAlgorithm;
  meta["tool_version"] = remis::kVersion;
  write_json(dir / "sample_metadata.json", meta);
  std::cout << "sample: wrote " << data.size() << " tuples to " << dir.string() << "\n";
  return 0;
}

json diagnostics_json(const std::map<std::string, double>& diag) {
  json out;
  for (const auto& [k, v] : diag) out[k] = v;
  return out;
}

int cmd_estimate(const CommonArgs& args, bool weight_side) {
  const remis::IniMap ini = load_config(args);
  const remis::GridwalkConfig gw = remis::gridwalk_config_from(ini);
  const remis::ToolConfig tool = remis::tool_config_from(ini);
  const remis::ExperimentConfig ecfg = remis::experiment_config_from(ini);
  const fs::path dir = ensure_out_dir(args);

  const remis::Workspace ws = remis::build_workspace(gw, tool.feature_decimals);
  const remis::SeedSpec seed{ecfg.master_seed, 0};
  const remis::Dataset data =
      tool.dataset_path.empty()
          ? remis::sample_transitions(ws.env.mdp, ws.family.d_D, tool.estimate_n, seed,
                                      ecfg.reward_noise)
          : remis::load_dataset(tool.dataset_path);
  data.validate(ws.env.mdp.n_states, ws.env.mdp.n_actions);

  json report;
  report["n"] = data.size();
  report["master_seed"] = ecfg.master_seed;
  report["tool_version"] = remis::kVersion;

  if (!weight_side) {
    const remis::ConstraintSystem sys = remis::build_q_system(
        data, ws.primal, ws.disc_ratio, ws.env.target, ws.env.mdp.gamma);
    const remis::QEstimate est =
        tool.estimate_nu == "none"
            ? remis::solve_unregularized(sys, ws.primal)
            : remis::solve_regularized(sys, ws.primal,
                                       remis::quadratic(anchor_from_config(tool, ws)),
                                       ws.family.by_name(tool.estimate_nu));
    write_sa_csv(dir / "q_hat.csv", est.values, ws.env.mdp.n_actions);
    report["nu"] = tool.estimate_nu;
    report["constraint_residual"] = est.constraint_residual;
    report["diagnostics"] = diagnostics_json(est.diagnostics);
    for (const char* name : remis::DistributionFamily::kNames)
      report["error"][name] =
          remis::weighted_l2_error(est.values, ws.q_pi, ws.family.by_name(name));
    write_json(dir / "estimate_q.json", report);
    std::cout << "estimate-q: wrote q_hat.csv, error under " << tool.estimate_nu << " = "
              << fmt(report["error"][tool.estimate_nu == "none" ? "U" : tool.estimate_nu]
                         .get<double>())
              << "\n";
  } else {
    const remis::InitDataset init =
        tool.init_dataset_path.empty()
            ? remis::sample_initial(ws.env.mdp, std::max<std::size_t>(1, data.size()), seed)
            : remis::load_init_dataset(tool.init_dataset_path);
    const remis::ConstraintSystem sys = remis::build_w_system(
        data, init, ws.w_primal, ws.w_disc, ws.env.target, ws.env.mdp.gamma);
    const remis::WEstimate est =
        tool.estimate_eta == "none"
            ? remis::solve_unregularized(sys, ws.w_primal)
            : remis::solve_regularized(sys, ws.w_primal,
                                       remis::quadratic(remis::SAFunction::Zero(
                                           ws.env.mdp.sa_count())),
                                       ws.family.by_name(tool.estimate_eta));
    write_sa_csv(dir / "w_hat.csv", est.values, ws.env.mdp.n_actions);
    report["eta"] = tool.estimate_eta;
    report["n0"] = init.size();
    report["constraint_residual"] = est.constraint_residual;
    report["diagnostics"] = diagnostics_json(est.diagnostics);
    for (const char* name : remis::DistributionFamily::kNames)
      report["error"][name] =
          remis::weighted_l2_error(est.values, ws.w_pi, ws.family.by_name(name));
    write_json(dir / "estimate_w.json", report);
    std::cout << "estimate-w: wrote w_hat.csv\n";
  }
  return 0;
}

int cmd_ope(const CommonArgs& args) {
  const remis::IniMap ini = load_config(args);
  const remis::GridwalkConfig gw = remis::gridwalk_config_from(ini);
  const remis::ToolConfig tool = remis::tool_config_from(ini);
  const remis::ExperimentConfig ecfg = remis::experiment_config_from(ini);
  const fs::path dir = ensure_out_dir(args);

  const remis::Workspace ws = remis::build_workspace(gw, tool.feature_decimals);
  const remis::SeedSpec seed{ecfg.master_seed, 0};
  const remis::Dataset data = remis::sample_transitions(ws.env.mdp, ws.family.d_D,
                                                        tool.estimate_n, seed, ecfg.reward_noise);
  const remis::InitDataset init = remis::sample_initial(ws.env.mdp, tool.estimate_n, seed);

  const remis::SAFunction zero = remis::SAFunction::Zero(ws.env.mdp.sa_count());
  const remis::ConstraintSystem q_sys = remis::build_q_system(
      data, ws.primal, ws.ope_q_disc, ws.env.target, ws.env.mdp.gamma);
  const remis::QEstimate q_est =
      tool.estimate_nu == "none"
          ? remis::solve_unregularized(q_sys, ws.primal)
          : remis::solve_regularized(q_sys, ws.primal, remis::quadratic(zero),
                                     ws.family.by_name(tool.estimate_nu));
  const remis::ConstraintSystem w_sys = remis::build_w_system(
      data, init, ws.w_primal, ws.w_disc, ws.env.target, ws.env.mdp.gamma);
  const remis::WEstimate w_est =
      tool.estimate_eta == "none"
          ? remis::solve_unregularized(w_sys, ws.w_primal)
          : remis::solve_regularized(w_sys, ws.w_primal, remis::quadratic(zero),
                                     ws.family.by_name(tool.estimate_eta));

  const remis::OpeReport rep = remis::ope_report(q_est.values, w_est.values, data, init,
                                                 ws.env.target, ws.env.mdp.gamma, ws.j_true);
  json out;
  out["j_q"] = rep.j_q;
  out["j_w"] = rep.j_w;
  out["j_dr"] = rep.j_dr;
  out["j_true"] = rep.j_true;
  out["err_q"] = rep.err_q;
  out["err_w"] = rep.err_w;
  out["err_dr"] = rep.err_dr;
  out["n"] = data.size();
  out["n0"] = init.size();
  out["nu"] = tool.estimate_nu;
  out["eta"] = tool.estimate_eta;
  out["tool_version"] = remis::kVersion;
  write_json(dir / "ope.json", out);
  std::cout << "ope: J = " << fmt(rep.j_true) << ", j_q = " << fmt(rep.j_q)
            << ", j_w = " << fmt(rep.j_w) << ", j_dr = " << fmt(rep.j_dr) << "\n";
  return 0;
}

std::map<std::string, std::map<std::string, std::string>> echo_of(const remis::IniMap& ini) {
  std::map<std::string, std::map<std::string, std::string>> echo;
  for (const auto& [section, entries] : ini)
    for (const auto& [key, value] : entries) echo[section][key] = value;
  return echo;
}

int cmd_experiment(const CommonArgs& args) {
  const remis::IniMap ini = load_config(args);
  const remis::ExperimentConfig cfg = remis::experiment_config_from(ini);
  const fs::path dir = ensure_out_dir(args);

  std::signal(SIGINT, handle_interrupt);
  std::signal(SIGTERM, handle_interrupt);
  const remis::ExperimentResult result =
      remis::run_experiment(cfg, args.threads, &g_interrupted);

  const fs::path csv_path = dir / (remis::to_string(cfg.experiment) + "_results.csv");
  std::ofstream csv(csv_path);
  if (!csv) throw remis::ConfigError("cannot open for writing: " + csv_path.string());
  remis::write_rows_csv(csv, result.rows, result.truncated);

  const fs::path meta_path = dir / (remis::to_string(cfg.experiment) + "_metadata.json");
  std::ofstream meta(meta_path);
  if (!meta) throw remis::ConfigError("cannot open for writing: " + meta_path.string());
  remis::write_metadata_json(meta, echo_of(ini), result);

  std::cout << "experiment: " << result.rows.size() << " rows -> " << csv_path.string()
            << (result.truncated ? " (truncated)" : "") << "\n";
  return result.truncated ? 3 : 0;
}

int cmd_check(const CommonArgs& args) {
  const remis::IniMap ini = load_config(args);
  const remis::GridwalkConfig gw = remis::gridwalk_config_from(ini);
  const auto results = remis::run_invariant_suite(gw);
  bool all_pass = true;
  for (const auto& check : results) {
    std::cout << (check.pass ? "PASS" : "FAIL") << "  " << check.name << "  " << check.detail
              << "\n";
    all_pass = all_pass && check.pass;
  }
  std::cout << (all_pass ? "check: all invariants hold\n" : "check: violations found\n");
  return all_pass ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Off-policy value and weight estimation via regularized "
               "marginalized importance sampling"};
  app.set_version_flag("--version", remis::kVersion);
  app.require_subcommand(1);

  CommonArgs args;
  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", args.config_path, "Path to an INI config file");
    cmd->add_option("--set", args.overrides, "Override as section.key=value (repeatable)");
    cmd->add_option("--out", args.out_dir, "Output directory");
    cmd->add_option("--seed", args.seed, "Master seed override");
    cmd->add_option("--threads", args.threads, "Worker threads (0 = hardware)");
  };

  CLI::App* exact = app.add_subcommand("exact", "Exact solver outputs and closed-form duals");
  CLI::App* sample = app.add_subcommand("sample", "Generate an offline dataset");
  CLI::App* est_q = app.add_subcommand("estimate-q", "One value-function estimation");
  CLI::App* est_w = app.add_subcommand("estimate-w", "One weight-function estimation");
  CLI::App* ope = app.add_subcommand("ope", "Return estimation from estimated nuisances");
  CLI::App* experiment = app.add_subcommand("experiment", "Run a replicate sweep");
  CLI::App* check = app.add_subcommand("check", "Run the invariant battery");
  for (CLI::App* cmd : {exact, sample, est_q, est_w, ope, experiment, check}) add_common(cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (exact->parsed()) return cmd_exact(args);
    if (sample->parsed()) return cmd_sample(args);
    if (est_q->parsed()) return cmd_estimate(args, false);
    if (est_w->parsed()) return cmd_estimate(args, true);
    if (ope->parsed()) return cmd_ope(args);
    if (experiment->parsed()) return cmd_experiment(args);
    if (check->parsed()) return cmd_check(args);
  } catch (const remis::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const remis::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
