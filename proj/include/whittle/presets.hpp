#pragma once

#include "whittle/sim.hpp"
#include "whittle/thompson.hpp"

namespace whittle::presets {

// Five-arm demo catalogs (four TypeA arms + one TypeB arm, initial beliefs
// 0.4, beta 0.99). Catalog 'a' has a type-B arm with near-unit reward
// probabilities that dominates every policy; 'b' is a close race between the
// type-B arm and the strongest type-A arm; in 'c' the type-B arm's low
// rho0 fools the myopic rule while the index policy farms it.
SimConfig five_arms(char which);

// Five-arm learning setup: true p = [0.15, 0.25, 0.25, 0.15, 0.15],
// rho0 = [0.2, 0.2, 0.1, 0.1, 0.1], rho1 = 0.7 known everywhere, a shared
// (2 x 2) candidate grid over (p, rho0) and a uniform prior.
LearningConfig shared_rho1_learning();

}  // namespace whittle::presets
