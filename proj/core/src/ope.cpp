#include "remis/ope.hpp"

#include <cmath>

namespace remis {

double j_q(const SAFunction& q_hat, const InitDataset& init, const Policy& pol,
           double gamma) {
  if (init.size() == 0) throw ConfigError("j_q: empty initial-state sample");
  double acc = 0.0;
  for (Index s0 : init.s0) acc += policy_value_at(q_hat, pol, s0);
  return (1.0 - gamma) * acc / static_cast<double>(init.size());
}

double j_w(const SAFunction& w_hat, const Dataset& data, const Policy& pol) {
  if (data.size() == 0) throw ConfigError("j_w: empty dataset");
  const Index A = pol.n_actions();
  double acc = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i)
    acc += w_hat(sa_index(data.s[i], data.a[i], A)) * data.r[i];
  return acc / static_cast<double>(data.size());
}

double j_dr(const SAFunction& q_hat, const SAFunction& w_hat, const Dataset& data,
            const InitDataset& init, const Policy& pol, double gamma,
            bool literal_no_gamma) {
  if (data.size() == 0 || init.size() == 0) throw ConfigError("j_dr: empty dataset");
  const Index A = pol.n_actions();
  const double discount = literal_no_gamma ? 1.0 : gamma;
  double correction = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Index sa = sa_index(data.s[i], data.a[i], A);
    correction += w_hat(sa) * (data.r[i] + discount * policy_value_at(q_hat, pol, data.s_next[i]) -
                               q_hat(sa));
  }
  return j_q(q_hat, init, pol, gamma) + correction / static_cast<double>(data.size());
}

double j_q_pop(const SAFunction& q_hat, const PopulationModel& pop) {
  return (1.0 - pop.mdp.gamma) * pop.mu0_pi.weights.dot(q_hat);
}

double j_w_pop(const SAFunction& w_hat, const PopulationModel& pop) {
  const TabularMdp& mdp = pop.mdp;
  double acc = 0.0;
  for (Index s = 0; s < mdp.n_states; ++s)
    for (Index a = 0; a < mdp.n_actions; ++a) {
      const Index sa = sa_index(s, a, mdp.n_actions);
      acc += pop.d_D.weights(sa) * w_hat(sa) * mdp.mean_reward(s, a);
    }
  return acc;
}

double j_dr_pop(const SAFunction& q_hat, const SAFunction& w_hat,
                const PopulationModel& pop, bool literal_no_gamma) {
  const TabularMdp& mdp = pop.mdp;
  const double discount = literal_no_gamma ? 1.0 : mdp.gamma;
  Vector r(mdp.sa_count());
  for (Index s = 0; s < mdp.n_states; ++s)
    for (Index a = 0; a < mdp.n_actions; ++a)
      r(sa_index(s, a, mdp.n_actions)) = mdp.mean_reward(s, a);
  const Vector td = r + discount * (pop.p_pi * q_hat) - q_hat;
  return j_q_pop(q_hat, pop) + pop.d_D.weights.dot(w_hat.cwiseProduct(td));
}

OpeReport ope_report(const SAFunction& q_hat, const SAFunction& w_hat, const Dataset& data,
                     const InitDataset& init, const Policy& pol, double gamma,
                     double j_true) {
  OpeReport rep;
  rep.j_q = j_q(q_hat, init, pol, gamma);
  rep.j_w = j_w(w_hat, data, pol);
  rep.j_dr = j_dr(q_hat, w_hat, data, init, pol, gamma);
  rep.j_true = j_true;
  rep.err_q = std::abs(rep.j_q - j_true);
  rep.err_w = std::abs(rep.j_w - j_true);
  rep.err_dr = std::abs(rep.j_dr - j_true);
  return rep;
}

}  // namespace remis
