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

// Exact robust dynamic-programming oracles and the quantities built on them:
// best-response gaps, regret curves and perturbation sweeps.

#ifndef DRMG_EVAL_H_
#define DRMG_EVAL_H_

#include <functional>
#include <vector>

#include "drmg/game.h"

namespace drmg {

struct ValueTables {
  std::vector<std::vector<Vector>> q;  // [player][h] over (state, joint action) pairs
  std::vector<std::vector<Vector>> v;  // [player][h] over states
};

// Robust values of a fixed joint policy, sigma given per player.
ValueTables robust_policy_eval(const LinearMarkovGame& game, const JointPolicy& policy,
                               const std::vector<double>& sigma);

// Distribution of the other players' joint action at every (h, s), indexed in
// game.actions().without(player).
class MarginalPolicy {
 public:
  MarginalPolicy(JointActionSpace others, int horizon, int num_states);

  const JointActionSpace& others() const { return others_; }
  Vector& at(int h, int s) { return probs_[h * num_states_ + s]; }
  const Vector& at(int h, int s) const { return probs_[h * num_states_ + s]; }

 private:
  JointActionSpace others_;
  int num_states_;
  std::vector<Vector> probs_;
};

MarginalPolicy marginalize_out(const LinearMarkovGame& game, const JointPolicy& policy,
                               int player);

struct BestResponse {
  std::vector<Vector> q;                 // [h] over state * |A_i| + own action
  std::vector<Vector> v;                 // [h] over states
  std::vector<std::vector<int>> action;  // [h][s], smallest maximiser
};

// Markov best response of `player` against the marginal of the others.
BestResponse robust_best_response(const LinearMarkovGame& game, const JointPolicy& policy,
                                  int player, double sigma);

struct RegretCurve {
  std::vector<std::vector<double>> gaps;        // [k][player]
  std::vector<std::vector<double>> cumulative;  // [k][player]
  std::vector<double> regret;                   // [k]: max over players of cumulative

  int episodes() const { return static_cast<int>(gaps.size()); }
  int num_players() const { return gaps.empty() ? 0 : static_cast<int>(gaps[0].size()); }
  void append(const std::vector<double>& episode_gaps);
};

// Robust best-response gap of each player at `initial_state`.
std::vector<double> policy_gaps(const LinearMarkovGame& game, const JointPolicy& policy,
                                const std::vector<double>& sigma, int initial_state);

RegretCurve regret_curve(const LinearMarkovGame& game, const std::vector<JointPolicy>& policies,
                         const std::vector<double>& sigma,
                         const std::vector<int>& initial_states);

struct PerturbationRow {
  double rho = 0.0;
  std::vector<double> values;  // per player, V_{i,1}(s_1) under the perturbed kernel
  double average = 0.0;
};

// Non-robust exact evaluation of `policy` on factory(rho) for every rho.
std::vector<PerturbationRow> evaluate_under_perturbation(
    const std::function<LinearMarkovGame(double)>& factory, const JointPolicy& policy,
    const std::vector<double>& rho_grid);

}  // namespace drmg

#endif  // DRMG_EVAL_H_
