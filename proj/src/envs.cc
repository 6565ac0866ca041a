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

#include "drmg/envs.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace drmg {
namespace {

Vector dirac(int size, int at) {
  Vector v = Vector::Zero(size);
  v(at) = 1.0;
  return v;
}

double param(const EnvParams& params, const std::string& key, double fallback) {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

void reject_unknown(const EnvParams& params, std::initializer_list<const char*> known,
                    const std::string& env) {
  for (const auto& [key, value] : params) {
    if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; })) {
      throw std::invalid_argument("unknown parameter '" + key + "' for environment " + env);
    }
  }
}

}  // namespace

LinearMarkovGame make_sim_game(double rho, double neutral_reward) {
  using namespace sim;
  if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("rho must lie in [0,1]");
  if (!(neutral_reward >= 0.0 && neutral_reward <= 1.0)) {
    throw std::invalid_argument("neutral reward must lie in [0,1]");
  }
  constexpr int S = 5;
  constexpr int d = 4;
  GameDefinition def;
  def.action_counts = {2, 2};
  def.num_states = S;
  def.horizon = 3;
  def.initial_state = kStart;
  def.fail_state = kFail;
  def.state_names = {"s0", "s1", "s2", "s_f", "s_n"};

  const JointActionSpace space(def.action_counts);
  const int A = space.size();
  def.features = Matrix::Zero(S * A, d);
  const int one_hot[S] = {-1, 0, 1, 2, 3};
  for (int s = 0; s < S; ++s) {
    for (int a = 0; a < A; ++a) {
      const int row = s * A + a;
      if (s == kStart) {
        const double m = space.component(a, 0) + space.component(a, 1);
        def.features.row(row) << 0.1 * m, 0.1 * m, 0.1, 0.9 - 0.2 * m;
      } else {
        def.features(row, one_hot[s]) = 1.0;
      }
    }
  }

  Matrix nominal(d, S);
  nominal.row(0) = dirac(S, kPlayerOneGoal).transpose();
  nominal.row(1) = dirac(S, kPlayerTwoGoal).transpose();
  nominal.row(2) = dirac(S, kFail).transpose();
  nominal.row(3) = dirac(S, kNeutral).transpose();
  Matrix leaky = nominal;
  leaky(0, kPlayerOneGoal) = 1.0 - rho;
  leaky(0, kFail) = rho;
  leaky(1, kPlayerTwoGoal) = 1.0 - rho;
  leaky(1, kFail) = rho;
  // The last transition leaves the horizon, so its factors never matter.
  def.factors = {nominal, leaky, nominal};

  Vector r1 = Vector::Zero(S);
  Vector r2 = Vector::Zero(S);
  r1(kPlayerOneGoal) = 1.0;
  r2(kPlayerTwoGoal) = 1.0;
  r1(kNeutral) = neutral_reward;
  r2(kNeutral) = neutral_reward;
  def.rewards.resize(2);
  for (int h = 0; h < def.horizon; ++h) {
    Vector t1(S * A), t2(S * A);
    for (int s = 0; s < S; ++s) {
      t1.segment(s * A, A).setConstant(r1(s));
      t2.segment(s * A, A).setConstant(r2(s));
    }
    def.rewards[0].push_back(t1);
    def.rewards[1].push_back(t2);
  }
  return LinearMarkovGame(std::move(def));
}

HardnessPair make_hardness_pair(double p, double q, double sigma) {
  using namespace hardness;
  if (!(0.0 < q && q < 0.5 && 0.5 < p && p < 1.0)) {
    throw std::invalid_argument("hardness pair requires 0 < q < 1/2 < p < 1");
  }
  if (!(sigma > 0.0 && sigma < q)) {
    throw std::invalid_argument("hardness pair requires 0 < sigma < q");
  }
  constexpr int S = 4;
  constexpr int H = 3;
  const std::vector<int> counts{2, 2};
  const JointActionSpace space(counts);
  const int A = space.size();

  // Rewards are shared by both instances. Every non-bad state pays 1 at the
  // first two steps, so the bad state is the unique minimiser of the step-2
  // value and absorbs the adversary's mass out of the good state.
  std::vector<std::vector<Vector>> rewards(2, std::vector<Vector>(H, Vector::Zero(S * A)));
  for (int i = 0; i < 2; ++i) {
    for (int h = 0; h < 2; ++h) {
      for (int s : {kGood, kGoodOne, kGoodTwo}) rewards[i][h].segment(s * A, A).setConstant(1.0);
    }
    rewards[i][2].segment((i == 0 ? kGoodOne : kGoodTwo) * A, A).setConstant(1.0);
  }

  auto build = [&](int theta) {
    std::vector<std::vector<Vector>> kernels(H, std::vector<Vector>(S * A));
    for (int h = 0; h < H; ++h) {
      for (int s = 0; s < S; ++s) {
        for (int a = 0; a < A; ++a) kernels[h][s * A + a] = dirac(S, s);
      }
    }
    for (int a = 0; a < A; ++a) {
      Vector split = Vector::Zero(S);
      split(kGoodOne) = 0.5;
      split(kGoodTwo) = 0.5;
      kernels[1][kGood * A + a] = split;

      const int a1 = space.component(a, 0);
      const int a2 = space.component(a, 1);
      const int own = theta - 1;  // a_{theta theta} in 0-based actions
      double to_one = 0.5;
      if (a1 == own && a2 == own) {
        to_one = p;
      } else if (a1 == 1 - own && a2 == 1 - own) {
        to_one = q;
      }
      Vector out = Vector::Zero(S);
      out(kGoodOne) = to_one;
      out(kGoodTwo) = 1.0 - to_one;
      kernels[1][kBad * A + a] = out;
    }
    return tabular_embedding(S, counts, kernels, rewards, H, kGood, std::nullopt,
                             {"s_good", "s_bad", "s_good^1", "s_good^2"});
  };

  return HardnessPair{build(1), build(2), p, q, sigma,
                      sigma * std::min(2.0 * p - 1.0, 1.0 - 2.0 * q)};
}

LinearMarkovGame make_learnability_mdp() {
  using namespace learnability;
  constexpr int S = 3;
  GameDefinition def;
  def.action_counts = {2};
  def.num_states = S;
  def.horizon = 2;
  def.initial_state = kStart;
  def.state_names = {"s0", "s1", "s2"};
  def.features = Matrix::Zero(S * 2, 2);
  def.features.row(kStart * 2 + 0) << 0.5, 0.5;
  def.features.row(kStart * 2 + 1) << 1.0, 0.0;
  def.features.row(kLow * 2 + 0) << 1.0, 0.0;
  def.features.row(kLow * 2 + 1) << 1.0, 0.0;
  def.features.row(kHigh * 2 + 0) << 0.0, 1.0;
  def.features.row(kHigh * 2 + 1) << 0.0, 1.0;

  Matrix first(2, S);
  first << 0.0, 1.0 / 2.0, 1.0 / 2.0,
           0.0, 1.0 / 3.0, 2.0 / 3.0;
  Matrix absorbing(2, S);
  absorbing << 0.0, 1.0, 0.0,
               0.0, 0.0, 1.0;
  def.factors = {first, absorbing};

  Vector r = Vector::Zero(S * 2);
  r.segment(kHigh * 2, 2).setConstant(1.0);
  def.rewards = {{r, r}};
  return LinearMarkovGame(std::move(def));
}

PerturbationSpec sim_perturbation(double rho) {
  PerturbationSpec spec;
  spec.rho = rho;
  spec.fail_shifts = {{1, 0}, {1, 1}};
  return spec;
}

double tv_distance(const Vector& p, const Vector& q) {
  return 0.5 * (p - q).cwiseAbs().sum();
}

LinearMarkovGame perturb(const LinearMarkovGame& game, const PerturbationSpec& spec) {
  if (!(spec.rho >= 0.0 && spec.rho <= 1.0)) throw std::invalid_argument("rho must lie in [0,1]");
  GameDefinition def = game.definition();
  auto check_row = [&](int h, int j) {
    if (h < 0 || h >= game.horizon() || j < 0 || j >= game.dimension()) {
      throw std::invalid_argument("perturbation targets a nonexistent factor row");
    }
  };
  if (!spec.fail_shifts.empty() && !game.fail_state()) {
    throw std::invalid_argument("fail-state perturbation on a game without a fail state");
  }
  for (const auto& [h, j] : spec.fail_shifts) {
    check_row(h, j);
    Vector row = def.factors[h].row(j).transpose();
    row *= 1.0 - spec.rho;
    row(*game.fail_state()) += spec.rho;
    def.factors[h].row(j) = row.transpose();
  }
  for (const auto& [key, row] : spec.replacements) {
    const auto [h, j] = key;
    check_row(h, j);
    if (row.size() != game.num_states() || row.minCoeff() < 0.0 ||
        std::abs(row.sum() - 1.0) > kSimplexTolerance) {
      throw std::invalid_argument("replacement factor row is not a distribution");
    }
    const double dist = tv_distance(row, game.factors(h).row(j).transpose());
    if (dist > spec.rho + 1e-12) {
      std::ostringstream msg;
      msg << "replacement row (h=" << h << ", j=" << j << ") is at TV distance " << dist
          << " > rho=" << spec.rho;
      throw std::invalid_argument(msg.str());
    }
    def.factors[h].row(j) = row.transpose();
  }
  return LinearMarkovGame(std::move(def));
}

LinearMarkovGame make_env(const std::string& name, const EnvParams& params) {
  if (name == "sim") {
    reject_unknown(params, {"rho", "r_n"}, name);
    return make_sim_game(param(params, "rho", 0.0),
                         param(params, "r_n", sim::kDefaultNeutralReward));
  }
  if (name == "hardness") {
    reject_unknown(params, {"p", "q", "sigma", "theta"}, name);
    const HardnessPair pair = make_hardness_pair(
        param(params, "p", 0.8), param(params, "q", 0.2), param(params, "sigma", 0.1));
    const double theta = param(params, "theta", 1.0);
    if (theta != 1.0 && theta != 2.0) throw std::invalid_argument("theta must be 1 or 2");
    return theta == 1.0 ? pair.first : pair.second;
  }
  if (name == "learnability") {
    reject_unknown(params, {}, name);
    return make_learnability_mdp();
  }
  throw std::invalid_argument("unknown environment '" + name + "'");
}

std::vector<std::string> env_names() { return {"sim", "hardness", "learnability"}; }

std::function<LinearMarkovGame(double)> perturbation_family(const std::string& name,
                                                            const EnvParams& params) {
  if (name != "sim") {
    throw std::invalid_argument("environment '" + name + "' has no perturbation family");
  }
  LinearMarkovGame base = make_env(name, params);
  return [base = std::move(base)](double rho) { return perturb(base, sim_perturbation(rho)); };
}

}  // namespace drmg
