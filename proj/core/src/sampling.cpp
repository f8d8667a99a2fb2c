#include "remis/sampling.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace remis {

void Dataset::validate(Index n_states, Index n_actions) const {
  if (a.size() != s.size() || r.size() != s.size() || s_next.size() != s.size())
    throw ConfigError("dataset: column lengths differ");
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] < 0 || s[i] >= n_states || s_next[i] < 0 || s_next[i] >= n_states)
      throw ConfigError("dataset: state index out of range");
    if (a[i] < 0 || a[i] >= n_actions) throw ConfigError("dataset: action index out of range");
    if (r[i] < 0.0 || r[i] > 1.0) throw ConfigError("dataset: reward outside [0,1]");
  }
}

Dataset sample_transitions(const TabularMdp& mdp, const StateActionDist& d_D,
                           std::size_t n, const SeedSpec& seed, RewardNoise noise) {
  if (n == 0) throw ConfigError("sample_transitions: n must be at least 1");
  if (d_D.size() != mdp.sa_count()) throw ConfigError("sample_transitions: d_D size mismatch");

  const Index A = mdp.n_actions;
  const Vector sa_cdf = cumulative(d_D.weights);
  // Per-pair next-state CDFs, built once.
  std::vector<Vector> next_cdf(mdp.sa_count());
  for (Index s = 0; s < mdp.n_states; ++s)
    for (Index a = 0; a < A; ++a)
      next_cdf[sa_index(s, a, A)] = cumulative(mdp.transition[a].row(s).transpose());

  Xoshiro256 rng(seed, /*purpose=*/0);
  Dataset out;
  out.s.reserve(n);
  out.a.reserve(n);
  out.r.reserve(n);
  out.s_next.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Index sa = sample_cdf(sa_cdf, rng.next_double());
    const Index s = sa / A, a = sa % A;
    const Index s2 = sample_cdf(next_cdf[sa], rng.next_double());
    double r = mdp.mean_reward(s, a);
    if (noise == RewardNoise::Bernoulli) r = rng.next_double() < r ? 1.0 : 0.0;
    out.s.push_back(s);
    out.a.push_back(a);
    out.r.push_back(r);
    out.s_next.push_back(s2);
  }
  return out;
}

InitDataset sample_initial(const TabularMdp& mdp, std::size_t n0, const SeedSpec& seed) {
  if (n0 == 0) throw ConfigError("sample_initial: n0 must be at least 1");
  const Vector cdf = cumulative(mdp.mu0);
  Xoshiro256 rng(seed, /*purpose=*/1);
  InitDataset out;
  out.s0.reserve(n0);
  for (std::size_t i = 0; i < n0; ++i) out.s0.push_back(sample_cdf(cdf, rng.next_double()));
  return out;
}

namespace {
std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
}  // namespace

void save_dataset(std::ostream& os, const Dataset& data) {
  os << "s,a,r,s_next\n";
  for (std::size_t i = 0; i < data.size(); ++i)
    os << data.s[i] << "," << data.a[i] << "," << fmt(data.r[i]) << "," << data.s_next[i]
       << "\n";
}

void save_dataset(const std::string& path, const Dataset& data) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open for writing: " + path);
  save_dataset(os, data);
}

Dataset load_dataset(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "s,a,r,s_next")
    throw ConfigError("dataset csv: bad header");
  Dataset out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    Index s, a, s2;
    double r;
    std::getline(row, cell, ',');
    s = std::stoll(cell);
    std::getline(row, cell, ',');
    a = std::stoll(cell);
    std::getline(row, cell, ',');
    r = std::stod(cell);
    std::getline(row, cell, ',');
    s2 = std::stoll(cell);
    out.s.push_back(s);
    out.a.push_back(a);
    out.r.push_back(r);
    out.s_next.push_back(s2);
  }
  return out;
}

Dataset load_dataset(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open dataset csv: " + path);
  return load_dataset(is);
}

void save_init_dataset(std::ostream& os, const InitDataset& init) {
  os << "s0\n";
  for (Index s : init.s0) os << s << "\n";
}

void save_init_dataset(const std::string& path, const InitDataset& init) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open for writing: " + path);
  save_init_dataset(os, init);
}

InitDataset load_init_dataset(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "s0") throw ConfigError("init csv: bad header");
  InitDataset out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    out.s0.push_back(std::stoll(line));
  }
  return out;
}

InitDataset load_init_dataset(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open init csv: " + path);
  return load_init_dataset(is);
}

}  // namespace remis
