#pragma once

#include <iosfwd>
#include <string>

#include "remis/mdp.hpp"

namespace remis {

/// Plain-text MDP fixture format. Layout:
///
///   remis-mdp 1
///   n_states <int>
///   n_actions <int>
///   gamma <real>
///   mu0 <n_states reals>
///   mean_reward <n_states * n_actions reals, row-major over (s, a)>
///   transition <n_states * n_actions * n_states reals, row-major over (s, a, s')>
///
/// All reals are written with 17 significant digits so a round trip is exact.
void save_mdp(std::ostream& os, const TabularMdp& mdp);
void save_mdp(const std::string& path, const TabularMdp& mdp);

TabularMdp load_mdp(std::istream& is);
TabularMdp load_mdp(const std::string& path);

}  // namespace remis
