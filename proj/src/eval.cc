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

#include "drmg/eval.h"

#include <algorithm>
#include <stdexcept>
#include <utility>

#include "drmg/robust_bellman.h"

namespace drmg {
namespace {

void check_policy(const LinearMarkovGame& game, const JointPolicy& policy) {
  if (policy.horizon() != game.horizon() || policy.num_states() != game.num_states() ||
      policy.num_joint_actions() != game.num_joint_actions()) {
    throw std::invalid_argument("policy does not match the game");
  }
  policy.check();
}

void check_player(const LinearMarkovGame& game, int player) {
  if (player < 0 || player >= game.num_players()) {
    throw std::out_of_range("player index out of range");
  }
}

// r + Phi * w for one player and step: expected next-step robust values per pair.
Vector backup(const LinearMarkovGame& game, int h, int player, const Vector& next,
              double sigma) {
  const Vector w = robust_factor_values(game, h, next, sigma);
  return game.rewards(player, h) + game.features() * w;
}

}  // namespace

ValueTables robust_policy_eval(const LinearMarkovGame& game, const JointPolicy& policy,
                               const std::vector<double>& sigma) {
  check_policy(game, policy);
  const int n = game.num_players();
  const int H = game.horizon();
  const int S = game.num_states();
  const int A = game.num_joint_actions();
  if (static_cast<int>(sigma.size()) != n) {
    throw std::invalid_argument("one uncertainty level per player required");
  }
  ValueTables out;
  out.q.assign(n, std::vector<Vector>(H));
  out.v.assign(n, std::vector<Vector>(H));
  for (int i = 0; i < n; ++i) {
    Vector next = Vector::Zero(S);
    for (int h = H - 1; h >= 0; --h) {
      out.q[i][h] = backup(game, h, i, next, sigma[i]);
      Vector v(S);
      for (int s = 0; s < S; ++s) v(s) = policy.at(h, s).dot(out.q[i][h].segment(s * A, A));
      out.v[i][h] = v;
      next = v;
    }
  }
  return out;
}

MarginalPolicy::MarginalPolicy(JointActionSpace others, int horizon, int num_states)
    : others_(std::move(others)),
      num_states_(num_states),
      probs_(static_cast<std::size_t>(horizon) * num_states, Vector::Zero(others_.size())) {}

MarginalPolicy marginalize_out(const LinearMarkovGame& game, const JointPolicy& policy,
                               int player) {
  check_player(game, player);
  check_policy(game, policy);
  const JointActionSpace& space = game.actions();
  MarginalPolicy out(space.without(player), game.horizon(), game.num_states());
  for (int h = 0; h < game.horizon(); ++h) {
    for (int s = 0; s < game.num_states(); ++s) {
      const Vector& pi = policy.at(h, s);
      Vector& m = out.at(h, s);
      for (int a = 0; a < space.size(); ++a) m(space.others_index(a, player)) += pi(a);
    }
  }
  return out;
}

BestResponse robust_best_response(const LinearMarkovGame& game, const JointPolicy& policy,
                                  int player, double sigma) {
  const MarginalPolicy others = marginalize_out(game, policy, player);
  const JointActionSpace& space = game.actions();
  const int H = game.horizon();
  const int S = game.num_states();
  const int A = space.size();
  const int own = space.num_actions(player);

  BestResponse out;
  out.q.resize(H);
  out.v.resize(H);
  out.action.assign(H, std::vector<int>(S, 0));
  Vector next = Vector::Zero(S);
  for (int h = H - 1; h >= 0; --h) {
    const Vector pair_q = backup(game, h, player, next, sigma);
    Vector q = Vector::Zero(S * own);
    for (int s = 0; s < S; ++s) {
      const Vector& m = others.at(h, s);
      for (int a = 0; a < A; ++a) {
        q(s * own + space.component(a, player)) +=
            m(space.others_index(a, player)) * pair_q(s * A + a);
      }
    }
    Vector v(S);
    for (int s = 0; s < S; ++s) {
      Eigen::Index best;
      v(s) = q.segment(s * own, own).maxCoeff(&best);
      out.action[h][s] = static_cast<int>(best);
    }
    out.q[h] = std::move(q);
    out.v[h] = v;
    next = v;
  }
  return out;
}

void RegretCurve::append(const std::vector<double>& episode_gaps) {
  if (!gaps.empty() && episode_gaps.size() != gaps.back().size()) {
    throw std::invalid_argument("gap vector has the wrong number of players");
  }
  std::vector<double> cum = episode_gaps;
  if (!cumulative.empty()) {
    for (std::size_t i = 0; i < cum.size(); ++i) cum[i] += cumulative.back()[i];
  }
  gaps.push_back(episode_gaps);
  regret.push_back(*std::max_element(cum.begin(), cum.end()));
  cumulative.push_back(std::move(cum));
}

std::vector<double> policy_gaps(const LinearMarkovGame& game, const JointPolicy& policy,
                                const std::vector<double>& sigma, int initial_state) {
  game.check_indices(0, initial_state, 0);
  const ValueTables values = robust_policy_eval(game, policy, sigma);
  std::vector<double> gaps(game.num_players());
  for (int i = 0; i < game.num_players(); ++i) {
    const BestResponse br = robust_best_response(game, policy, i, sigma[i]);
    gaps[i] = br.v[0](initial_state) - values.v[i][0](initial_state);
  }
  return gaps;
}

RegretCurve regret_curve(const LinearMarkovGame& game, const std::vector<JointPolicy>& policies,
                         const std::vector<double>& sigma,
                         const std::vector<int>& initial_states) {
  if (policies.size() != initial_states.size()) {
    throw std::invalid_argument("one initial state per policy required");
  }
  RegretCurve curve;
  for (std::size_t k = 0; k < policies.size(); ++k) {
    curve.append(policy_gaps(game, policies[k], sigma, initial_states[k]));
  }
  return curve;
}

std::vector<PerturbationRow> evaluate_under_perturbation(
    const std::function<LinearMarkovGame(double)>& factory, const JointPolicy& policy,
    const std::vector<double>& rho_grid) {
  std::vector<PerturbationRow> rows;
  for (double rho : rho_grid) {
    const LinearMarkovGame game = factory(rho);
    const int n = game.num_players();
    const ValueTables values = robust_policy_eval(game, policy, std::vector<double>(n, 0.0));
    PerturbationRow row;
    row.rho = rho;
    for (int i = 0; i < n; ++i) row.values.push_back(values.v[i][0](game.initial_state()));
    double total = 0.0;
    for (double v : row.values) total += v;
    row.average = total / n;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace drmg
