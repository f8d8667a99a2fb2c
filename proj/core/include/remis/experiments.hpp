#pragma once

#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "remis/estimators.hpp"
#include "remis/gridwalk.hpp"
#include "remis/ope.hpp"
#include "remis/stats.hpp"

namespace remis {

enum class ExperimentKind { Fig1, Fig2, OpeCompare, Rate };

ExperimentKind experiment_kind_from_string(const std::string& s);
std::string to_string(ExperimentKind kind);

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::Fig1;
  std::vector<std::size_t> sample_sizes = {125, 250, 500, 1000, 2000, 4000, 8000};
  std::size_t n_runs = 200;
  std::uint64_t master_seed = 1;
  GridwalkConfig gridwalk;
  /// Regularizing distributions; "none" selects the unregularized estimator.
  std::vector<std::string> reg_distributions = {"d_D", "mu0_pi", "d_pi", "U", "p", "none"};
  std::vector<std::string> eval_distributions = {"d_D", "mu0_pi", "d_pi", "U", "p"};
  /// Model-quality grid (model sweep only).
  std::vector<double> m_grid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  bool masked = false;
  /// Initial-state sample size; 0 means "match n".
  std::size_t n0 = 0;
  int feature_decimals = 3;
  RewardNoise reward_noise = RewardNoise::MeanValue;
  bool dr_gamma_literal = false;

  void validate() const;
};

/// One CSV output row. Optional fields render as empty cells.
struct ResultRow {
  std::string experiment;
  std::size_t replicate = 0;
  std::size_t n = 0;
  std::size_t n0 = 0;
  std::string reg_dist;
  std::string eval_dist;
  std::optional<double> m;
  std::optional<bool> masked;
  double error = 0.0;
  std::optional<double> return_error_q;
  std::optional<double> return_error_w;
  std::optional<double> return_error_dr;
  double constraint_residual = 0.0;
  std::uint64_t seed = 0;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;
  /// Flat summary statistics (medians, slopes, confidence bounds).
  std::map<std::string, double> summary;
  std::vector<std::string> warnings;
  bool truncated = false;
};

/// Precomputed Gridwalk quantities shared by every replicate.
struct Workspace {
  GridwalkEnv env;
  DistributionFamily family;
  SAFunction q_pi;
  SAFunction w_pi;
  double j_true = 0.0;
  LinearClass primal;        // value-aggregation features
  LinearClass disc_ratio;    // closed-form dual discriminators
  LinearClass disc_model;    // masked-model discriminators (mask per cfg)
  LinearClass w_primal;      // weight-estimation primal class
  LinearClass w_disc;        // weight-estimation discriminator class
  LinearClass ope_q_disc;    // disc_ratio plus density-ratio columns
  PopulationModel pop;
};

Workspace build_workspace(const GridwalkConfig& cfg, int feature_decimals = 3,
                          bool masked_model = false);

/// Runs the configured experiment. Replicates are distributed across
/// `threads` workers (0 = hardware concurrency); output is identical for any
/// thread count. A set `stop` flag finishes in-flight replicates, marks the
/// result truncated, and returns what was collected.
ExperimentResult run_experiment(const ExperimentConfig& cfg, int threads = 0,
                                const std::atomic<bool>* stop = nullptr);

/// Individual runners (same semantics, fixed kind).
ExperimentResult run_reg_sweep(const ExperimentConfig& cfg, int threads = 0,
                               const std::atomic<bool>* stop = nullptr);
ExperimentResult run_model_sweep(const ExperimentConfig& cfg, int threads = 0,
                                 const std::atomic<bool>* stop = nullptr);
ExperimentResult run_rate(const ExperimentConfig& cfg, int threads = 0,
                          const std::atomic<bool>* stop = nullptr);
ExperimentResult run_ope_compare(const ExperimentConfig& cfg, int threads = 0,
                                 const std::atomic<bool>* stop = nullptr);

/// CSV schema, in exact column order:
/// experiment,replicate,n,n0,reg_dist,eval_dist,m,masked,error,
/// return_error_q,return_error_w,return_error_dr,constraint_residual,seed
void write_rows_csv(std::ostream& os, const std::vector<ResultRow>& rows,
                    bool truncated = false);

/// Metadata sidecar: config echo, RNG identifier, build version, summary.
void write_metadata_json(std::ostream& os,
                         const std::map<std::string, std::map<std::string, std::string>>& echo,
                         const ExperimentResult& result);

}  // namespace remis
