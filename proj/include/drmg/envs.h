// Copyright 2026 The drmg Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Test environments.

#ifndef DRMG_ENVS_H_
#define DRMG_ENVS_H_

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "drmg/game.h"

namespace drmg {

// State indices of the five-state simulation game.
namespace sim {
inline constexpr int kStart = 0;
inline constexpr int kPlayerOneGoal = 1;
inline constexpr int kPlayerTwoGoal = 2;
inline constexpr int kFail = 3;
inline constexpr int kNeutral = 4;
inline constexpr double kDefaultNeutralReward = 0.45;
}  // namespace sim

// Two players with binary actions, H = 3, d = 4. From the start state the
// feature (0.1m, 0.1m, 0.1, 0.9 - 0.2m), m = a_1 + a_2, mixes the two goal
// states, the fail state and the neutral state; every other state has a
// one-hot feature. At the second transition each goal state leaks mass
// `rho` into the fail state. Rewards depend on the state only.
LinearMarkovGame make_sim_game(double rho, double neutral_reward = sim::kDefaultNeutralReward);

namespace hardness {
inline constexpr int kGood = 0;
inline constexpr int kBad = 1;
inline constexpr int kGoodOne = 2;  // player 0's favourable terminal state
inline constexpr int kGoodTwo = 3;  // player 1's favourable terminal state
}  // namespace hardness

struct HardnessPair {
  LinearMarkovGame first;   // theta = 1
  LinearMarkovGame second;  // theta = 2
  double p = 0.0;
  double q = 0.0;
  double sigma = 0.0;
  // sigma * min{2p - 1, 1 - 2q}: lower bound on the two-instance, two-player
  // per-episode gap of any policy that cannot tell the instances apart.
  double regret_floor = 0.0;
};

// Tabular two-player instances on {good, bad, good^1, good^2} that differ
// only in the step-2 kernel out of the bad state. Requires
// 0 < q < 1/2 < p < 1 and 0 < sigma < q.
HardnessPair make_hardness_pair(double p = 0.8, double q = 0.2, double sigma = 0.1);

namespace learnability {
inline constexpr int kStart = 0;
inline constexpr int kLow = 1;
inline constexpr int kHigh = 2;
}  // namespace learnability

// Single-player, three states, two actions, d = 2, H = 2. phi(s0, a1) =
// (1/2, 1/2) and phi(s0, a2) = (1, 0); the step-1 factors give
// P(s2 | s0, a1) = 7/12 and P(s2 | s0, a2) = 1/2.
LinearMarkovGame make_learnability_mdp();

// Moves mass toward the fail state in selected factor rows, or replaces
// rows outright.
struct PerturbationSpec {
  double rho = 0.0;
  // (step, factor) rows whose mass is mixed as (1 - rho) mu + rho delta_fail.
  std::vector<std::pair<int, int>> fail_shifts;
  // (step, factor) -> replacement distribution; must stay within TV rho.
  std::map<std::pair<int, int>, Vector> replacements;
};

// The scheme used by the simulation game: both goal-state factors at the
// second step.
PerturbationSpec sim_perturbation(double rho);

// Throws std::invalid_argument if rho is outside [0,1], a shift is requested
// on a game without a fail state, or a replacement row is not a distribution
// within TV rho of the nominal row.
LinearMarkovGame perturb(const LinearMarkovGame& game, const PerturbationSpec& spec);

// Half-L1 distance.
double tv_distance(const Vector& p, const Vector& q);

// Named environment registry for the CLI. Parameters not given take their
// defaults: sim {rho, r_n}, hardness {p, q, sigma, theta}, learnability {}.
using EnvParams = std::map<std::string, double>;
LinearMarkovGame make_env(const std::string& name, const EnvParams& params);
std::vector<std::string> env_names();

// Factory over the test-time perturbation level for a named environment;
// only "sim" supports it.
std::function<LinearMarkovGame(double)> perturbation_family(const std::string& name,
                                                            const EnvParams& params);

}  // namespace drmg

#endif  // DRMG_ENVS_H_
