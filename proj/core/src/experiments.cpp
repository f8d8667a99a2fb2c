#include "remis/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <thread>
#include <tuple>
#include <utility>

#include <json.hpp>

#include "remis/rng.hpp"
#include "remis/version.hpp"

namespace remis {

ExperimentKind experiment_kind_from_string(const std::string& s) {
  if (s == "fig1") return ExperimentKind::Fig1;
  if (s == "fig2") return ExperimentKind::Fig2;
  if (s == "ope_compare") return ExperimentKind::OpeCompare;
  if (s == "rate") return ExperimentKind::Rate;
  throw ConfigError("unknown experiment kind: " + s);
}

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Fig1: return "fig1";
    case ExperimentKind::Fig2: return "fig2";
    case ExperimentKind::OpeCompare: return "ope_compare";
    case ExperimentKind::Rate: return "rate";
  }
  throw ConfigError("unknown experiment kind");
}

void ExperimentConfig::validate() const {
  if (sample_sizes.empty()) throw ConfigError("experiment: sample_sizes must be non-empty");
  if (!std::is_sorted(sample_sizes.begin(), sample_sizes.end()))
    throw ConfigError("experiment: sample_sizes must be ascending");
  if (sample_sizes.front() == 0) throw ConfigError("experiment: sample sizes must be positive");
  if (n_runs == 0) throw ConfigError("experiment: n_runs must be at least 1");
  if (reg_distributions.empty()) throw ConfigError("experiment: no regularizing distributions");
  const auto known = [](const std::string& name) {
    for (const char* candidate : DistributionFamily::kNames)
      if (name == candidate) return true;
    return false;
  };
  for (const auto& name : reg_distributions)
    if (name != "none" && !known(name))
      throw ConfigError("experiment: unknown regularizing distribution '" + name + "'");
  for (const auto& name : eval_distributions)
    if (!known(name))
      throw ConfigError("experiment: unknown evaluation distribution '" + name + "'");
  if (experiment == ExperimentKind::Fig2) {
    if (m_grid.empty()) throw ConfigError("experiment: m_grid must be non-empty");
    for (double m : m_grid)
      if (m < 0.0 || m > 1.0) throw ConfigError("experiment: m_grid values must lie in [0,1]");
  }
}

Workspace build_workspace(const GridwalkConfig& cfg, int feature_decimals,
                          bool masked_model) {
  Workspace ws;
  ws.env = build_gridwalk(cfg);
  ws.family = distribution_family(ws.env.mdp, ws.env.target, ws.env.behavior, cfg);
  ws.q_pi = exact_q(ws.env.mdp, ws.env.target);
  ws.w_pi = weight_function(ws.family.d_pi, ws.family.d_D);
  ws.j_true = return_of(ws.env.mdp, ws.env.target);
  ws.primal = aggregate_by_value(ws.q_pi, feature_decimals);
  ws.disc_ratio = value_ratio_discriminators(ws.env.mdp, ws.env.target, ws.family,
                                             ws.q_pi, ws.family.d_D);
  // Unmasked models use an everywhere-positive mask, collapsing the masked
  // column families onto their plain forms.
  const StateActionDist& mask = masked_model ? ws.family.p : ws.family.U;
  ws.disc_model = masked_model_discriminators(ws.env.mdp, ws.env.target, ws.family,
                                              ws.q_pi, ws.family.d_D, mask);
  ws.w_primal = weight_primal_features(ws.env.mdp, ws.env.target, ws.family, ws.family.d_D);
  ws.w_disc = weight_discriminator_features(ws.env.mdp, ws.env.target, ws.family, ws.w_pi,
                                            ws.family.d_D);

  // Return-oriented discriminator: the closed-form dual columns plus plain
  // density-ratio columns so the true importance weight is in the span.
  ws.ope_q_disc.name = "ope_q_disc";
  ws.ope_q_disc.features.resize(ws.env.mdp.sa_count(),
                                ws.disc_ratio.width() + ws.w_primal.width());
  ws.ope_q_disc.features << ws.disc_ratio.features, ws.w_primal.features;
  ws.ope_q_disc.column_scales.resize(ws.ope_q_disc.width());
  ws.ope_q_disc.column_scales << ws.disc_ratio.column_scales, ws.w_primal.column_scales;

  ws.pop = population_mode(ws.env.mdp, ws.env.target, ws.family.d_D, ws.family.mu0_pi);
  return ws;
}

namespace {

struct RowKey {
  std::tuple<std::string, std::size_t, std::size_t, std::string, std::string, double, int>
  operator()(const ResultRow& r) const {
    return {r.experiment, r.replicate,       r.n,
            r.reg_dist,   r.eval_dist,       r.m.value_or(-1.0),
            r.masked ? static_cast<int>(*r.masked) : -1};
  }
};

void sort_rows(std::vector<ResultRow>& rows) {
  std::sort(rows.begin(), rows.end(),
            [](const ResultRow& a, const ResultRow& b) { return RowKey{}(a) < RowKey{}(b); });
}

/// Runs one replicate task per (replicate) index on a small worker pool and
/// concatenates the produced rows. Row order is fixed afterwards by sorting,
/// so the schedule cannot affect output.
template <typename Task>
void parallel_replicates(std::size_t n_runs, int threads, Task&& task,
                         const std::atomic<bool>* stop, ExperimentResult& result) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned n_workers = threads <= 0 ? hw : static_cast<unsigned>(threads);
  std::vector<std::vector<ResultRow>> per_rep(n_runs);
  std::vector<std::vector<std::string>> per_rep_warnings(n_runs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t rep = next.fetch_add(1);
      if (rep >= n_runs) return;
      if (stop && stop->load()) return;
      task(rep, per_rep[rep], per_rep_warnings[rep]);
    }
  };
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& chunk : per_rep)
    result.rows.insert(result.rows.end(), std::make_move_iterator(chunk.begin()),
                       std::make_move_iterator(chunk.end()));
  for (auto& chunk : per_rep_warnings)
    result.warnings.insert(result.warnings.end(), std::make_move_iterator(chunk.begin()),
                           std::make_move_iterator(chunk.end()));
}

/// A failed condition drops its rows and leaves a note; one bad condition
/// must not abort the whole sweep.
template <typename Body>
void guarded(std::vector<std::string>& warnings, std::size_t rep, std::size_t n,
             const std::string& reg, Body&& body) {
  try {
    body();
  } catch (const std::exception& e) {
    warnings.push_back("replicate " + std::to_string(rep) + " n " + std::to_string(n) +
                       " reg " + reg + ": " + e.what());
  }
}

QEstimate estimate_for(const Workspace& ws, const std::string& reg_name,
                       const SAFunction& anchor, const ConstraintSystem& sys) {
  if (reg_name == "none") return solve_unregularized(sys, ws.primal);
  return solve_regularized(sys, ws.primal, quadratic(anchor),
                           ws.family.by_name(reg_name));
}

std::size_t init_size(const ExperimentConfig& cfg, std::size_t n) {
  return cfg.n0 > 0 ? cfg.n0 : n;
}

void add_rate_summary(ExperimentResult& result, const ExperimentConfig& cfg,
                      const std::string& reg, const std::string& eval) {
  std::vector<double> ns, meds;
  for (std::size_t n : cfg.sample_sizes) {
    std::vector<double> errs;
    for (const ResultRow& row : result.rows)
      if (row.n == n && row.reg_dist == reg && row.eval_dist == eval)
        errs.push_back(row.error);
    if (errs.empty()) continue;
    ns.push_back(static_cast<double>(n));
    meds.push_back(median(errs));
    result.summary["median_n" + std::to_string(n)] = meds.back();
  }
  if (ns.size() >= 2) result.summary["loglog_slope"] = loglog_slope(ns, meds);
}

}  // namespace

ExperimentResult run_reg_sweep(const ExperimentConfig& cfg, int threads,
                               const std::atomic<bool>* stop) {
  cfg.validate();
  const Workspace ws = build_workspace(cfg.gridwalk, cfg.feature_decimals, false);
  const std::string label = to_string(cfg.experiment);

  auto task = [&](std::size_t rep, std::vector<ResultRow>& rows,
                  std::vector<std::string>& warnings) {
    for (std::size_t ni = 0; ni < cfg.sample_sizes.size(); ++ni) {
      const std::size_t n = cfg.sample_sizes[ni];
      const std::uint64_t seed = derive_seed(cfg.master_seed, rep, ni);
      const Dataset data = sample_transitions(ws.env.mdp, ws.family.d_D, n,
                                              SeedSpec{seed, 0}, cfg.reward_noise);
      const InitDataset init = sample_initial(ws.env.mdp, init_size(cfg, n), SeedSpec{seed, 1});
      const ConstraintSystem sys =
          build_q_system(data, ws.primal, ws.disc_ratio, ws.env.target, ws.env.mdp.gamma);
      const SAFunction zero = SAFunction::Zero(ws.env.mdp.sa_count());
      for (const std::string& reg : cfg.reg_distributions)
        guarded(warnings, rep, n, reg, [&] {
          const QEstimate est = estimate_for(ws, reg, zero, sys);
          for (const std::string& eval : cfg.eval_distributions) {
            ResultRow row{label, rep,  n,   init.size(), reg, eval, {}, {},
                          weighted_l2_error(est.values, ws.q_pi, ws.family.by_name(eval)),
                          {},    {},   {},  est.constraint_residual, seed};
            rows.push_back(std::move(row));
          }
          const double jq = j_q(est.values, init, ws.env.target, ws.env.mdp.gamma);
          ResultRow ret{label, rep, n, init.size(), reg, "return", {}, {},
                        std::abs(jq - ws.j_true),
                        std::abs(jq - ws.j_true), {}, {},
                        est.constraint_residual, seed};
          rows.push_back(std::move(ret));
        });
    }
  };

  ExperimentResult result;
  parallel_replicates(cfg.n_runs, threads, task, stop, result);
  result.truncated = stop && stop->load();
  sort_rows(result.rows);
  return result;
}

ExperimentResult run_rate(const ExperimentConfig& cfg, int threads,
                          const std::atomic<bool>* stop) {
  if (cfg.sample_sizes.size() < 4)
    throw ConfigError("rate experiment needs at least 4 sample sizes");
  ExperimentConfig rate_cfg = cfg;
  if (rate_cfg.reg_distributions.size() != 1)
    rate_cfg.reg_distributions = {"U"};
  if (rate_cfg.eval_distributions.size() != 1)
    rate_cfg.eval_distributions = {rate_cfg.reg_distributions.front()};
  ExperimentResult result = run_reg_sweep(rate_cfg, threads, stop);
  add_rate_summary(result, rate_cfg, rate_cfg.reg_distributions.front(),
                   rate_cfg.eval_distributions.front());
  return result;
}

ExperimentResult run_model_sweep(const ExperimentConfig& cfg, int threads,
                                 const std::atomic<bool>* stop) {
  cfg.validate();
  const Workspace ws = build_workspace(cfg.gridwalk, cfg.feature_decimals, cfg.masked);
  const std::string label = to_string(cfg.experiment);

  std::vector<std::string> regs;
  for (const std::string& reg : cfg.reg_distributions)
    if (reg != "none") regs.push_back(reg);  // a model anchor needs a regularizer
  if (regs.empty()) throw ConfigError("model sweep: need at least one regularizing distribution");

  auto task = [&](std::size_t rep, std::vector<ResultRow>& rows,
                  std::vector<std::string>& warnings) {
    for (std::size_t ni = 0; ni < cfg.sample_sizes.size(); ++ni) {
      const std::size_t n = cfg.sample_sizes[ni];
      const std::uint64_t seed = derive_seed(cfg.master_seed, rep, ni);
      const Dataset data = sample_transitions(ws.env.mdp, ws.family.d_D, n,
                                              SeedSpec{seed, 0}, cfg.reward_noise);
      const ConstraintSystem sys =
          build_q_system(data, ws.primal, ws.disc_model, ws.env.target, ws.env.mdp.gamma);
      for (double m : cfg.m_grid) {
        const SAFunction anchor = uniform_model(ws.q_pi, m, ws.family.p, cfg.masked);
        for (const std::string& reg : regs)
          guarded(warnings, rep, n, reg, [&] {
            const QEstimate est = estimate_for(ws, reg, anchor, sys);
            for (const std::string& eval : cfg.eval_distributions)
              rows.push_back(ResultRow{
                  label, rep, n, 0, reg, eval, m, cfg.masked,
                  weighted_l2_error(est.values, ws.q_pi, ws.family.by_name(eval)),
                  {}, {}, {}, est.constraint_residual, seed});
          });
      }
    }
  };

  ExperimentResult result;
  parallel_replicates(cfg.n_runs, threads, task, stop, result);
  result.truncated = stop && stop->load();

  // Deterministic baseline: the model itself as the estimate.
  for (double m : cfg.m_grid) {
    const SAFunction anchor = uniform_model(ws.q_pi, m, ws.family.p, cfg.masked);
    for (const std::string& eval : cfg.eval_distributions)
      result.rows.push_back(ResultRow{
          label, 0, 0, 0, "model", eval, m, cfg.masked,
          weighted_l2_error(anchor, ws.q_pi, ws.family.by_name(eval)),
          {}, {}, {}, 0.0, 0});
  }
  sort_rows(result.rows);
  return result;
}

ExperimentResult run_ope_compare(const ExperimentConfig& cfg, int threads,
                                 const std::atomic<bool>* stop) {
  cfg.validate();
  const Workspace ws = build_workspace(cfg.gridwalk, cfg.feature_decimals, false);
  const std::string label = to_string(cfg.experiment);

  auto task = [&](std::size_t rep, std::vector<ResultRow>& rows,
                  std::vector<std::string>& warnings) {
    for (std::size_t ni = 0; ni < cfg.sample_sizes.size(); ++ni) {
      const std::size_t n = cfg.sample_sizes[ni];
      const std::uint64_t seed = derive_seed(cfg.master_seed, rep, ni);
      const Dataset data = sample_transitions(ws.env.mdp, ws.family.d_D, n,
                                              SeedSpec{seed, 0}, cfg.reward_noise);
      const InitDataset init = sample_initial(ws.env.mdp, init_size(cfg, n), SeedSpec{seed, 1});
      const ConstraintSystem q_sys =
          build_q_system(data, ws.primal, ws.ope_q_disc, ws.env.target, ws.env.mdp.gamma);
      const ConstraintSystem w_sys = build_w_system(data, init, ws.w_primal, ws.w_disc,
                                                    ws.env.target, ws.env.mdp.gamma);
      const SAFunction zero = SAFunction::Zero(ws.env.mdp.sa_count());
      for (const std::string& reg : cfg.reg_distributions)
        guarded(warnings, rep, n, reg, [&] {
          const QEstimate q_est = estimate_for(ws, reg, zero, q_sys);
          const WEstimate w_est =
              reg == "none"
                  ? solve_unregularized(w_sys, ws.w_primal)
                  : solve_regularized(w_sys, ws.w_primal, quadratic(zero),
                                      ws.family.by_name(reg));
          OpeReport rep_ope;
          rep_ope.j_q = j_q(q_est.values, init, ws.env.target, ws.env.mdp.gamma);
          rep_ope.j_w = j_w(w_est.values, data, ws.env.target);
          rep_ope.j_dr = j_dr(q_est.values, w_est.values, data, init, ws.env.target,
                              ws.env.mdp.gamma, cfg.dr_gamma_literal);
          ResultRow row{label, rep, n, init.size(), reg, "return", {}, {},
                        std::abs(rep_ope.j_dr - ws.j_true),
                        std::abs(rep_ope.j_q - ws.j_true),
                        std::abs(rep_ope.j_w - ws.j_true),
                        std::abs(rep_ope.j_dr - ws.j_true),
                        q_est.constraint_residual, seed};
          rows.push_back(std::move(row));
        });
    }
  };

  ExperimentResult result;
  parallel_replicates(cfg.n_runs, threads, task, stop, result);
  result.truncated = stop && stop->load();
  sort_rows(result.rows);

  // Per-estimator log-log slopes of median return error against n.
  for (const std::string& reg : cfg.reg_distributions) {
    for (const std::string which : {"q", "w", "dr"}) {
      std::vector<double> ns, meds;
      for (std::size_t n : cfg.sample_sizes) {
        std::vector<double> errs;
        for (const ResultRow& row : result.rows) {
          if (row.n != n || row.reg_dist != reg) continue;
          const auto& v = which == "q" ? row.return_error_q
                          : which == "w" ? row.return_error_w
                                         : row.return_error_dr;
          if (v) errs.push_back(*v);
        }
        if (errs.empty()) continue;
        ns.push_back(static_cast<double>(n));
        meds.push_back(median(errs));
        result.summary["median_" + which + "_" + reg + "_n" + std::to_string(n)] = meds.back();
      }
      if (ns.size() >= 2)
        result.summary["slope_" + which + "_" + reg] = loglog_slope(ns, meds);
    }
  }
  return result;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, int threads,
                                const std::atomic<bool>* stop) {
  switch (cfg.experiment) {
    case ExperimentKind::Fig1: return run_reg_sweep(cfg, threads, stop);
    case ExperimentKind::Fig2: return run_model_sweep(cfg, threads, stop);
    case ExperimentKind::OpeCompare: return run_ope_compare(cfg, threads, stop);
    case ExperimentKind::Rate: return run_rate(cfg, threads, stop);
  }
  throw ConfigError("unknown experiment kind");
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string cell(const std::optional<double>& v) { return v ? fmt(*v) : ""; }

}  // namespace

void write_rows_csv(std::ostream& os, const std::vector<ResultRow>& rows, bool truncated) {
  os << "experiment,replicate,n,n0,reg_dist,eval_dist,m,masked,error,"
        "return_error_q,return_error_w,return_error_dr,constraint_residual,seed\n";
  for (const ResultRow& r : rows) {
    os << r.experiment << "," << r.replicate << "," << r.n << "," << r.n0 << "," << r.reg_dist
       << "," << r.eval_dist << "," << cell(r.m) << ","
       << (r.masked ? (*r.masked ? "1" : "0") : "") << "," << fmt(r.error) << ","
       << cell(r.return_error_q) << "," << cell(r.return_error_w) << ","
       << cell(r.return_error_dr) << "," << fmt(r.constraint_residual) << "," << r.seed
       << "\n";
  }
  if (truncated) os << "# truncated\n";
}

void write_metadata_json(std::ostream& os,
                         const std::map<std::string, std::map<std::string, std::string>>& echo,
                         const ExperimentResult& result) {
  nlohmann::json meta;
  meta["tool_version"] = kVersion;
  meta["rng_algorithm"] = kRngAlgorithm;
  meta["config"] = echo;
  meta["row_count"] = result.rows.size();
  meta["truncated"] = result.truncated;
  meta["summary"] = result.summary;
  meta["warnings"] = result.warnings;
  meta["bootstrap"] = {{"method", "percentile"}, {"levels", {0.025, 0.975}}};
  os << meta.dump(2) << "\n";
}

}  // namespace remis
