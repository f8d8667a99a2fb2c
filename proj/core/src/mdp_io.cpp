#include "remis/mdp_io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace remis {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void expect_token(std::istream& is, const std::string& want) {
  std::string tok;
  if (!(is >> tok) || tok != want)
    throw ConfigError("mdp file: expected token '" + want + "', got '" + tok + "'");
}

double read_real(std::istream& is) {
  double v;
  if (!(is >> v)) throw ConfigError("mdp file: truncated numeric data");
  return v;
}

}  // namespace

void save_mdp(std::ostream& os, const TabularMdp& mdp) {
  os << "remis-mdp 1\n";
  os << "n_states " << mdp.n_states << "\n";
  os << "n_actions " << mdp.n_actions << "\n";
  os << "gamma " << fmt(mdp.gamma) << "\n";
  os << "mu0";
  for (Index s = 0; s < mdp.n_states; ++s) os << " " << fmt(mdp.mu0(s));
  os << "\nmean_reward";
  for (Index s = 0; s < mdp.n_states; ++s)
    for (Index a = 0; a < mdp.n_actions; ++a) os << " " << fmt(mdp.mean_reward(s, a));
  os << "\ntransition";
  for (Index s = 0; s < mdp.n_states; ++s)
    for (Index a = 0; a < mdp.n_actions; ++a)
      for (Index s2 = 0; s2 < mdp.n_states; ++s2)
        os << " " << fmt(mdp.transition[a](s, s2));
  os << "\n";
}

void save_mdp(const std::string& path, const TabularMdp& mdp) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open for writing: " + path);
  save_mdp(os, mdp);
}

TabularMdp load_mdp(std::istream& is) {
  expect_token(is, "remis-mdp");
  expect_token(is, "1");
  TabularMdp mdp;
  expect_token(is, "n_states");
  is >> mdp.n_states;
  expect_token(is, "n_actions");
  is >> mdp.n_actions;
  if (!is || mdp.n_states <= 0 || mdp.n_actions <= 0)
    throw ConfigError("mdp file: bad dimensions");
  expect_token(is, "gamma");
  mdp.gamma = read_real(is);

  expect_token(is, "mu0");
  mdp.mu0.resize(mdp.n_states);
  for (Index s = 0; s < mdp.n_states; ++s) mdp.mu0(s) = read_real(is);

  expect_token(is, "mean_reward");
  mdp.mean_reward.resize(mdp.n_states, mdp.n_actions);
  for (Index s = 0; s < mdp.n_states; ++s)
    for (Index a = 0; a < mdp.n_actions; ++a) mdp.mean_reward(s, a) = read_real(is);

  expect_token(is, "transition");
  mdp.transition.assign(mdp.n_actions, Matrix::Zero(mdp.n_states, mdp.n_states));
  for (Index s = 0; s < mdp.n_states; ++s)
    for (Index a = 0; a < mdp.n_actions; ++a)
      for (Index s2 = 0; s2 < mdp.n_states; ++s2)
        mdp.transition[a](s, s2) = read_real(is);

  mdp.validate();
  return mdp;
}

TabularMdp load_mdp(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open mdp file: " + path);
  return load_mdp(is);
}

}  // namespace remis
