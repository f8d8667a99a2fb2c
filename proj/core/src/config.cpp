#include "remis/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <sstream>

namespace remis {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

double to_real(const std::string& section, const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double out = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw ConfigError("config: bad real for " + section + "." + key + ": '" + v + "'");
  }
}

long long to_int(const std::string& section, const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long out = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw ConfigError("config: bad integer for " + section + "." + key + ": '" + v + "'");
  }
}

bool to_bool(const std::string& section, const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("config: bad boolean for " + section + "." + key + ": '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::istringstream is(v);
  std::string item;
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

/// Pulls known keys from a section, erroring on leftovers.
class SectionReader {
 public:
  SectionReader(const IniMap& ini, std::string section) : section_(std::move(section)) {
    auto it = ini.find(section_);
    if (it != ini.end()) entries_ = it->second;
  }

  bool has(const std::string& key) const { return entries_.count(key) > 0; }

  std::string take(const std::string& key, const std::string& fallback) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    std::string v = it->second;
    entries_.erase(it);
    return v;
  }

  double take_real(const std::string& key, double fallback) {
    return has(key) ? to_real(section_, key, take(key, "")) : fallback;
  }
  long long take_int(const std::string& key, long long fallback) {
    return has(key) ? to_int(section_, key, take(key, "")) : fallback;
  }
  bool take_bool(const std::string& key, bool fallback) {
    return has(key) ? to_bool(section_, key, take(key, "")) : fallback;
  }

  void finish() const {
    if (!entries_.empty())
      throw ConfigError("config: unknown key '" + entries_.begin()->first + "' in section [" +
                        section_ + "]");
  }

 private:
  std::string section_;
  std::map<std::string, std::string> entries_;
};

}  // namespace

IniMap parse_ini(std::istream& is) {
  IniMap ini;
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config: malformed section header at line " + std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw ConfigError("config: empty section name at line " + std::to_string(lineno));
      ini[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: expected key = value at line " + std::to_string(lineno));
    if (section.empty())
      throw ConfigError("config: key outside any section at line " + std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("config: empty key at line " + std::to_string(lineno));
    ini[section][key] = trim(line.substr(eq + 1));
  }
  return ini;
}

IniMap parse_ini_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file: " + path);
  return parse_ini(is);
}

void apply_overrides(IniMap& ini, const std::vector<std::string>& overrides) {
  for (const std::string& ov : overrides) {
    const auto eq = ov.find('=');
    const auto dot = ov.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq)
      throw ConfigError("override must look like section.key=value: '" + ov + "'");
    const std::string section = trim(ov.substr(0, dot));
    const std::string key = trim(ov.substr(dot + 1, eq - dot - 1));
    if (section.empty() || key.empty())
      throw ConfigError("override must look like section.key=value: '" + ov + "'");
    ini[section][key] = trim(ov.substr(eq + 1));
  }
}

GridwalkConfig gridwalk_config_from(const IniMap& ini) {
  SectionReader sec(ini, "gridwalk");
  GridwalkConfig cfg;
  cfg.width = sec.take_int("width", cfg.width);
  cfg.height = sec.take_int("height", cfg.height);
  cfg.gamma = sec.take_real("gamma", cfg.gamma);
  cfg.p_threshold = sec.take_real("p_threshold", cfg.p_threshold);
  cfg.mix_eps = sec.take_real("mix_eps", cfg.mix_eps);
  const std::string shape = sec.take("reward_shape", "inverse_manhattan");
  if (shape != "inverse_manhattan")
    throw ConfigError("config: unknown reward_shape '" + shape + "'");
  const std::string mode = sec.take("data_dist", "discounted");
  if (mode == "discounted")
    cfg.data_dist = DataDistMode::DiscountedOccupancy;
  else if (mode == "truncated")
    cfg.data_dist = DataDistMode::TruncatedOccupancy;
  else
    throw ConfigError("config: unknown data_dist '" + mode + "'");
  cfg.truncation_horizon = sec.take_int("truncation_horizon", cfg.truncation_horizon);
  sec.finish();
  return cfg;
}

ExperimentConfig experiment_config_from(const IniMap& ini) {
  ExperimentConfig cfg;
  cfg.gridwalk = gridwalk_config_from(ini);

  SectionReader feat(ini, "features");
  cfg.feature_decimals = static_cast<int>(feat.take_int("decimals", cfg.feature_decimals));
  feat.take_bool("normalize_columns", true);
  feat.finish();

  SectionReader sec(ini, "experiment");
  cfg.experiment = experiment_kind_from_string(sec.take("kind", "fig1"));
  if (sec.has("sample_sizes")) {
    cfg.sample_sizes.clear();
    for (const std::string& item : split_list(sec.take("sample_sizes", "")))
      cfg.sample_sizes.push_back(to_int("experiment", "sample_sizes", item));
  }
  cfg.n_runs = sec.take_int("n_runs", cfg.n_runs);
  cfg.master_seed = static_cast<std::uint64_t>(sec.take_int("master_seed", 1));
  if (sec.has("reg_dists")) cfg.reg_distributions = split_list(sec.take("reg_dists", ""));
  if (sec.has("eval_dists")) cfg.eval_distributions = split_list(sec.take("eval_dists", ""));
  if (sec.has("m_grid")) {
    cfg.m_grid.clear();
    for (const std::string& item : split_list(sec.take("m_grid", "")))
      cfg.m_grid.push_back(to_real("experiment", "m_grid", item));
  }
  cfg.masked = sec.take_bool("masked", cfg.masked);
  cfg.n0 = sec.take_int("n0", 0);
  const std::string noise = sec.take("reward_noise", "mean");
  if (noise == "mean")
    cfg.reward_noise = RewardNoise::MeanValue;
  else if (noise == "bernoulli")
    cfg.reward_noise = RewardNoise::Bernoulli;
  else
    throw ConfigError("config: unknown reward_noise '" + noise + "'");
  cfg.dr_gamma_literal = sec.take_bool("dr_gamma_literal", cfg.dr_gamma_literal);
  sec.finish();

  cfg.validate();
  return cfg;
}

ToolConfig tool_config_from(const IniMap& ini) {
  ToolConfig cfg;
  SectionReader feat(ini, "features");
  cfg.feature_decimals = static_cast<int>(feat.take_int("decimals", cfg.feature_decimals));
  cfg.normalize_columns = feat.take_bool("normalize_columns", cfg.normalize_columns);
  feat.finish();

  SectionReader reg(ini, "regularizer");
  cfg.anchor = reg.take("anchor", cfg.anchor);
  if (cfg.anchor != "zero" && cfg.anchor != "exact_q" && cfg.anchor != "model")
    throw ConfigError("config: unknown anchor '" + cfg.anchor + "'");
  cfg.model_m = reg.take_real("model_m", cfg.model_m);
  cfg.model_masked = reg.take_bool("model_masked", cfg.model_masked);
  cfg.support_average = reg.take_bool("support_average", cfg.support_average);
  reg.finish();

  SectionReader exact(ini, "exact");
  cfg.exact_nu = exact.take("nu", cfg.exact_nu);
  cfg.exact_eta = exact.take("eta", cfg.exact_eta);
  cfg.exact_mdp_file = exact.take("mdp_file", "");
  exact.finish();

  SectionReader sample(ini, "sample");
  cfg.sample_n = sample.take_int("n", cfg.sample_n);
  cfg.sample_n0 = sample.take_int("n0", cfg.sample_n0);
  sample.finish();

  SectionReader est(ini, "estimate");
  cfg.estimate_n = est.take_int("n", cfg.estimate_n);
  cfg.estimate_nu = est.take("nu", cfg.estimate_nu);
  cfg.estimate_eta = est.take("eta", cfg.estimate_eta);
  cfg.dataset_path = est.take("dataset", "");
  cfg.init_dataset_path = est.take("init_dataset", "");
  est.finish();
  return cfg;
}

}  // namespace remis
