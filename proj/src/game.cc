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

#include "drmg/game.h"

#include <cmath>
#include <sstream>
#include <utility>

namespace drmg {

JointActionSpace::JointActionSpace(std::vector<int> action_counts)
    : counts_(std::move(action_counts)) {
  if (counts_.empty()) throw std::invalid_argument("at least one player required");
  strides_.resize(counts_.size());
  size_ = 1;
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (counts_[i] < 1) throw std::invalid_argument("action counts must be positive");
    strides_[i] = size_;
    size_ *= counts_[i];
  }
}

int JointActionSpace::encode(std::span<const int> actions) const {
  if (actions.size() != counts_.size()) {
    throw std::invalid_argument("joint action has wrong number of components");
  }
  int joint = 0;
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (actions[i] < 0 || actions[i] >= counts_[i]) {
      throw std::out_of_range("action index out of range");
    }
    joint += actions[i] * strides_[i];
  }
  return joint;
}

std::vector<int> JointActionSpace::decode(int joint) const {
  std::vector<int> out(counts_.size());
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    out[i] = (joint / strides_[i]) % counts_[i];
  }
  return out;
}

int JointActionSpace::component(int joint, int player) const {
  return (joint / strides_[player]) % counts_[player];
}

int JointActionSpace::with_component(int joint, int player, int action) const {
  return joint + (action - component(joint, player)) * strides_[player];
}

int JointActionSpace::others_index(int joint, int player) const {
  const int low = joint % strides_[player];
  const int high = joint / (strides_[player] * counts_[player]);
  return low + high * strides_[player];
}

JointActionSpace JointActionSpace::without(int player) const {
  std::vector<int> rest;
  for (int i = 0; i < num_players(); ++i) {
    if (i != player) rest.push_back(counts_[i]);
  }
  // A single player's "others" space is the one-point space.
  if (rest.empty()) rest.push_back(1);
  return JointActionSpace(std::move(rest));
}

std::vector<std::vector<Vector>> expand_linear_rewards(
    const Matrix& features, const std::vector<std::vector<Vector>>& eta) {
  std::vector<std::vector<Vector>> out(eta.size());
  for (std::size_t i = 0; i < eta.size(); ++i) {
    for (const Vector& e : eta[i]) {
      if (e.size() != features.cols()) {
        throw std::invalid_argument("reward parameter has wrong dimension");
      }
      out[i].push_back(features * e);
    }
  }
  return out;
}

LinearMarkovGame::LinearMarkovGame(GameDefinition def)
    : def_(std::move(def)), actions_(def_.action_counts) {
  const int n = actions_.num_players();
  const int pairs = def_.num_states * actions_.size();
  if (def_.num_states < 1) throw std::invalid_argument("need at least one state");
  if (def_.horizon < 1) throw std::invalid_argument("horizon must be positive");
  if (def_.features.cols() < 1) throw std::invalid_argument("feature dimension must be positive");
  if (def_.features.rows() != pairs) {
    throw std::invalid_argument("feature table must have |S|*|A| rows");
  }
  if (static_cast<int>(def_.factors.size()) != def_.horizon) {
    throw std::invalid_argument("one factor matrix per step required");
  }
  for (const Matrix& m : def_.factors) {
    if (m.rows() != def_.features.cols() || m.cols() != def_.num_states) {
      throw std::invalid_argument("factor matrices must be d x |S|");
    }
  }
  if (static_cast<int>(def_.rewards.size()) != n) {
    throw std::invalid_argument("one reward table per player required");
  }
  for (const auto& per_step : def_.rewards) {
    if (static_cast<int>(per_step.size()) != def_.horizon) {
      throw std::invalid_argument("one reward vector per step required");
    }
    for (const Vector& r : per_step) {
      if (r.size() != pairs) throw std::invalid_argument("reward vector must cover |S|*|A| pairs");
    }
  }
  if (def_.initial_state < 0 || def_.initial_state >= def_.num_states) {
    throw std::out_of_range("initial state out of range");
  }
  if (def_.fail_state && (*def_.fail_state < 0 || *def_.fail_state >= def_.num_states)) {
    throw std::out_of_range("fail state out of range");
  }
  if (!def_.state_names.empty() &&
      static_cast<int>(def_.state_names.size()) != def_.num_states) {
    throw std::invalid_argument("state_names must be empty or name every state");
  }
}

std::string LinearMarkovGame::state_name(int s) const {
  if (!def_.state_names.empty()) return def_.state_names.at(s);
  return "s" + std::to_string(s);
}

void LinearMarkovGame::check_indices(int h, int s, int a) const {
  if (h < 0 || h >= horizon()) throw std::out_of_range("step index out of range");
  if (s < 0 || s >= num_states()) throw std::out_of_range("state index out of range");
  if (a < 0 || a >= num_joint_actions()) throw std::out_of_range("joint action index out of range");
}

Vector transition_distribution(const LinearMarkovGame& game, int h, int s, int a) {
  game.check_indices(h, s, a);
  return game.factors(h).transpose() * game.feature(s, a).transpose();
}

double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int sample_index(const Vector& probs, std::mt19937_64& rng) {
  const double u = uniform_unit(rng);
  double acc = 0.0;
  int last_positive = 0;
  for (int i = 0; i < probs.size(); ++i) {
    if (probs(i) <= 0.0) continue;
    acc += probs(i);
    last_positive = i;
    if (u < acc) return i;
  }
  // Rounding left acc slightly below 1.
  return last_positive;
}

int sample_next_state(const LinearMarkovGame& game, int h, int s, int a,
                      std::mt19937_64& rng) {
  return sample_index(transition_distribution(game, h, s, a), rng);
}

LinearMarkovGame tabular_embedding(
    int num_states, std::vector<int> action_counts,
    const std::vector<std::vector<Vector>>& kernels,
    std::vector<std::vector<Vector>> rewards, int horizon, int initial_state,
    std::optional<int> fail_state, std::vector<std::string> state_names) {
  const JointActionSpace space(action_counts);
  const int pairs = num_states * space.size();
  if (static_cast<int>(kernels.size()) != horizon) {
    throw std::invalid_argument("one kernel table per step required");
  }
  GameDefinition def;
  def.action_counts = std::move(action_counts);
  def.num_states = num_states;
  def.horizon = horizon;
  def.initial_state = initial_state;
  def.fail_state = fail_state;
  def.features = Matrix::Identity(pairs, pairs);
  def.rewards = std::move(rewards);
  def.state_names = std::move(state_names);
  for (int h = 0; h < horizon; ++h) {
    if (static_cast<int>(kernels[h].size()) != pairs) {
      throw std::invalid_argument("kernel table must cover |S|*|A| pairs");
    }
    Matrix factor(pairs, num_states);
    for (int p = 0; p < pairs; ++p) {
      const Vector& row = kernels[h][p];
      if (row.size() != num_states) throw std::invalid_argument("kernel row has wrong length");
      if (row.minCoeff() < 0.0 || std::abs(row.sum() - 1.0) > kKernelTolerance) {
        std::ostringstream msg;
        msg << "kernel row (h=" << h << ", s=" << p / space.size()
            << ", a=" << p % space.size() << ") is not a distribution";
        throw ValidationError(msg.str());
      }
      factor.row(p) = row.transpose();
    }
    def.factors.push_back(std::move(factor));
  }
  return LinearMarkovGame(std::move(def));
}

std::string Violation::describe() const {
  std::ostringstream out;
  switch (kind) {
    case Kind::kFeatureNegative: out << "feature entry negative"; break;
    case Kind::kFeatureSimplex: out << "feature row does not sum to 1"; break;
    case Kind::kFactorNegative: out << "factor measure entry negative"; break;
    case Kind::kFactorSimplex: out << "factor measure does not sum to 1"; break;
    case Kind::kKernelNegative: out << "induced kernel entry negative"; break;
    case Kind::kKernelSum: out << "induced kernel row does not sum to 1"; break;
    case Kind::kRewardRange: out << "reward outside [0,1]"; break;
    case Kind::kFailNotAbsorbing: out << "fail state is not absorbing"; break;
    case Kind::kFailReward: out << "fail state has nonzero reward"; break;
    case Kind::kIndexRange: out << "index out of range"; break;
  }
  if (step >= 0) out << " h=" << step;
  if (state >= 0) out << " s=" << state;
  if (action >= 0) out << " a=" << action;
  if (coordinate >= 0) out << " j=" << coordinate;
  if (player >= 0) out << " i=" << player;
  out << " residual=" << residual;
  return out.str();
}

std::vector<Violation> validate(const LinearMarkovGame& game) {
  using K = Violation::Kind;
  std::vector<Violation> out;
  const int S = game.num_states();
  const int A = game.num_joint_actions();
  const int d = game.dimension();

  for (int s = 0; s < S; ++s) {
    for (int a = 0; a < A; ++a) {
      const auto phi = game.feature(s, a);
      for (int j = 0; j < d; ++j) {
        if (phi(j) < 0.0) out.push_back({K::kFeatureNegative, -1, s, a, j, -1, phi(j)});
      }
      const double resid = phi.sum() - 1.0;
      if (std::abs(resid) > kSimplexTolerance) {
        out.push_back({K::kFeatureSimplex, -1, s, a, -1, -1, resid});
      }
    }
  }
  for (int h = 0; h < game.horizon(); ++h) {
    const Matrix& mu = game.factors(h);
    for (int j = 0; j < d; ++j) {
      for (int sp = 0; sp < S; ++sp) {
        if (mu(j, sp) < 0.0) out.push_back({K::kFactorNegative, h, sp, -1, j, -1, mu(j, sp)});
      }
      const double resid = mu.row(j).sum() - 1.0;
      if (std::abs(resid) > kSimplexTolerance) {
        out.push_back({K::kFactorSimplex, h, -1, -1, j, -1, resid});
      }
    }
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < A; ++a) {
        const Vector p = transition_distribution(game, h, s, a);
        if (p.minCoeff() < -kKernelTolerance) {
          out.push_back({K::kKernelNegative, h, s, a, -1, -1, p.minCoeff()});
        }
        const double resid = p.sum() - 1.0;
        if (std::abs(resid) > kKernelTolerance) {
          out.push_back({K::kKernelSum, h, s, a, -1, -1, resid});
        }
        if (game.fail_state() && s == *game.fail_state()) {
          const double stay = p(s) - 1.0;
          if (std::abs(stay) > kKernelTolerance) {
            out.push_back({K::kFailNotAbsorbing, h, s, a, -1, -1, stay});
          }
        }
      }
    }
    for (int i = 0; i < game.num_players(); ++i) {
      for (int s = 0; s < S; ++s) {
        for (int a = 0; a < A; ++a) {
          const double r = game.reward(i, h, s, a);
          if (r < 0.0 || r > 1.0) out.push_back({K::kRewardRange, h, s, a, -1, i, r});
          if (game.fail_state() && s == *game.fail_state() && r != 0.0) {
            out.push_back({K::kFailReward, h, s, a, -1, i, r});
          }
        }
      }
    }
  }
  return out;
}

JointPolicy::JointPolicy(int horizon, int num_states, int num_joint_actions)
    : horizon_(horizon),
      num_states_(num_states),
      num_joint_(num_joint_actions),
      probs_(static_cast<std::size_t>(horizon) * num_states,
             Vector::Zero(num_joint_actions)) {}

JointPolicy JointPolicy::uniform(const LinearMarkovGame& game) {
  JointPolicy p(game.horizon(), game.num_states(), game.num_joint_actions());
  for (auto& row : p.probs_) row.setConstant(1.0 / game.num_joint_actions());
  return p;
}

void JointPolicy::check() const {
  for (int h = 0; h < horizon_; ++h) {
    for (int s = 0; s < num_states_; ++s) {
      const Vector& row = at(h, s);
      if (row.size() != num_joint_ || row.minCoeff() < 0.0 ||
          std::abs(row.sum() - 1.0) > kSimplexTolerance) {
        std::ostringstream msg;
        msg << "policy row (h=" << h << ", s=" << s << ") is not a distribution";
        throw ValidationError(msg.str());
      }
    }
  }
}

bool JointPolicy::operator==(const JointPolicy& other) const {
  if (horizon_ != other.horizon_ || num_states_ != other.num_states_ ||
      num_joint_ != other.num_joint_) {
    return false;
  }
  for (std::size_t k = 0; k < probs_.size(); ++k) {
    if (probs_[k] != other.probs_[k]) return false;
  }
  return true;
}

EpisodeRecord rollout(const LinearMarkovGame& game, const JointPolicy& policy,
                      std::mt19937_64& rng) {
  EpisodeRecord ep;
  int s = game.initial_state();
  for (int h = 0; h < game.horizon(); ++h) {
    const int a = sample_index(policy.at(h, s), rng);
    std::vector<double> r(game.num_players());
    for (int i = 0; i < game.num_players(); ++i) r[i] = game.reward(i, h, s, a);
    ep.states.push_back(s);
    ep.actions.push_back(a);
    ep.rewards.push_back(std::move(r));
    s = sample_next_state(game, h, s, a, rng);
  }
  ep.final_state = s;
  return ep;
}

}  // namespace drmg
