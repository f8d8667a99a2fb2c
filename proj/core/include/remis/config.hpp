#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "remis/experiments.hpp"
#include "remis/gridwalk.hpp"

namespace remis {

/// Parsed INI-style configuration: [section] blocks of key = value lines.
/// '#' and ';' start comments. Keys are section-scoped.
using IniMap = std::map<std::string, std::map<std::string, std::string>>;

IniMap parse_ini(std::istream& is);
IniMap parse_ini_file(const std::string& path);

/// Applies "section.key=value" override strings (later entries win).
void apply_overrides(IniMap& ini, const std::vector<std::string>& overrides);

/// Typed views over the config. Unknown keys raise ConfigError so typos
/// cannot silently fall back to defaults.
GridwalkConfig gridwalk_config_from(const IniMap& ini);
ExperimentConfig experiment_config_from(const IniMap& ini);

/// Remaining tool parameters (subcommand sections).
struct ToolConfig {
  int feature_decimals = 3;
  bool normalize_columns = true;
  // [regularizer]
  std::string anchor = "zero";  // zero | exact_q | model
  double model_m = 1.0;
  bool model_masked = false;
  bool support_average = false;
  // [exact]
  std::string exact_nu = "U";
  std::string exact_eta = "d_D";
  /// When set, `exact` loads this MDP fixture instead of building Gridwalk.
  std::string exact_mdp_file;
  // [sample]
  std::size_t sample_n = 1000;
  std::size_t sample_n0 = 100;
  // [estimate]
  std::size_t estimate_n = 500;
  std::string estimate_nu = "U";
  std::string estimate_eta = "d_D";
  std::string dataset_path;       // reuse a dumped dataset instead of sampling
  std::string init_dataset_path;
};

ToolConfig tool_config_from(const IniMap& ini);

}  // namespace remis
