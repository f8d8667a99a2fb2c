#include "remis/gridwalk.hpp"

#include <cmath>
#include <cstdlib>

namespace remis {

namespace {

// Action order is fixed: right, down, left, up.
constexpr Index kRight = 0, kDown = 1, kLeft = 2, kUp = 3;
constexpr Index kActions = 4;

struct Cell {
  Index row, col;
};

Index cell_index(const Cell& c, Index width) { return c.row * width + c.col; }

Cell step(const Cell& c, Index a, Index width, Index height) {
  Index r = c.row, col = c.col;
  switch (a) {
    case kRight: col += 1; break;
    case kDown: r += 1; break;
    case kLeft: col -= 1; break;
    case kUp: r -= 1; break;
    default: std::abort();
  }
  if (r < 0 || r >= height || col < 0 || col >= width) return c;  // wall: stay
  return Cell{r, col};
}

/// Finite-horizon discounted occupancy, renormalized to sum one.
StateActionDist truncated_occupancy(const TabularMdp& mdp, const Policy& pol,
                                    const StateActionDist& init, Index horizon) {
  const Matrix P = transition_matrix(mdp, pol);
  Vector cur = init.weights;
  Vector acc = Vector::Zero(cur.size());
  double scale = 1.0;
  for (Index t = 0; t < horizon; ++t) {
    acc += scale * cur;
    scale *= mdp.gamma;
    cur = P.transpose() * cur;
  }
  return StateActionDist::normalized(std::move(acc));
}

}  // namespace

GridwalkEnv build_gridwalk(const GridwalkConfig& cfg) {
  if (cfg.width < 2 || cfg.height < 2)
    throw ConfigError("gridwalk: grid must be at least 2x2");
  if (cfg.gamma < 0.0 || cfg.gamma >= 1.0) throw ConfigError("gridwalk: bad gamma");
  if (cfg.p_threshold <= 0.0) throw ConfigError("gridwalk: p_threshold must be positive");
  if (cfg.mix_eps < 0.0 || cfg.mix_eps >= 1.0) throw ConfigError("gridwalk: bad mix_eps");

  const Index W = cfg.width, H = cfg.height, S = W * H;
  const Cell goal{H - 1, W - 1};

  TabularMdp mdp;
  mdp.n_states = S;
  mdp.n_actions = kActions;
  mdp.gamma = cfg.gamma;
  mdp.transition.assign(kActions, Matrix::Zero(S, S));
  mdp.mean_reward.resize(S, kActions);
  mdp.mu0 = Vector::Zero(S);

  for (Index r = 0; r < H; ++r)
    for (Index c = 0; c < W; ++c) {
      const Cell here{r, c};
      const Index s = cell_index(here, W);
      const double dist =
          static_cast<double>(std::llabs(r - goal.row) + std::llabs(c - goal.col));
      for (Index a = 0; a < kActions; ++a) {
        mdp.mean_reward(s, a) = 1.0 / (1.0 + dist);
        mdp.transition[a](s, cell_index(step(here, a, W, H), W)) = 1.0;
      }
    }

  // Initial states uniform over the upper half of the grid.
  const Index upper_rows = H / 2;
  const double m0 = 1.0 / static_cast<double>(upper_rows * W);
  for (Index r = 0; r < upper_rows; ++r)
    for (Index c = 0; c < W; ++c) mdp.mu0(cell_index(Cell{r, c}, W)) = m0;

  Policy target, behavior;
  target.probs = Matrix::Zero(S, kActions);
  behavior.probs = Matrix::Zero(S, kActions);
  for (Index r = 0; r < H; ++r)
    for (Index c = 0; c < W; ++c) {
      const Index s = cell_index(Cell{r, c}, W);
      const bool at_right_wall = (c == W - 1);
      target.probs(s, at_right_wall ? kDown : kRight) = 1.0;
      if (at_right_wall) {
        behavior.probs(s, kDown) = 0.5;
        behavior.probs(s, kLeft) = 0.5;
      } else {
        behavior.probs(s, kRight) = 0.1;
        behavior.probs(s, kDown) = 0.4;
        behavior.probs(s, kLeft) = 0.5;
      }
    }

  mdp.validate();
  target.validate();
  behavior.validate();
  return GridwalkEnv{std::move(mdp), std::move(target), std::move(behavior), cfg};
}

const StateActionDist& DistributionFamily::by_name(const std::string& name) const {
  if (name == "d_D") return d_D;
  if (name == "mu0_pi") return mu0_pi;
  if (name == "d_pi") return d_pi;
  if (name == "U") return U;
  if (name == "p") return p;
  throw ConfigError("unknown distribution name: " + name);
}

DistributionFamily distribution_family(const TabularMdp& mdp, const Policy& target,
                                       const Policy& behavior, const GridwalkConfig& cfg) {
  const Index n = mdp.sa_count();

  const StateActionDist mu0_b = initial_sa_dist(mdp, behavior);
  StateActionDist d_D = cfg.data_dist == DataDistMode::DiscountedOccupancy
                            ? occupancy(mdp, behavior, mu0_b)
                            : truncated_occupancy(mdp, behavior, mu0_b,
                                                  cfg.truncation_horizon);
  // Mixing floor keeps d_D strictly positive even where the behavior policy
  // assigns probability zero.
  d_D = StateActionDist((1.0 - cfg.mix_eps) * d_D.weights +
                        Vector::Constant(n, cfg.mix_eps / static_cast<double>(n)));

  StateActionDist mu0_pi = initial_sa_dist(mdp, target);
  StateActionDist d_pi = occupancy(mdp, target, mu0_pi);
  StateActionDist U(Vector::Constant(n, 1.0 / static_cast<double>(n)));

  const SAFunction w_pi = weight_function(d_pi, d_D);
  Vector p_raw = Vector::Zero(n);
  for (Index i = 0; i < n; ++i)
    if (w_pi(i) > cfg.p_threshold) p_raw(i) = d_pi.weights(i);
  if (p_raw.sum() <= 0.0)
    throw EmptySupport("distribution_family: no pair has w_pi above p_threshold");
  StateActionDist p = StateActionDist::normalized(std::move(p_raw));

  return DistributionFamily{std::move(d_D), std::move(mu0_pi), std::move(d_pi),
                            std::move(U), std::move(p)};
}

}  // namespace remis
