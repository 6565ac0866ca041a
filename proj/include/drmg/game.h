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

#ifndef DRMG_GAME_H_
#define DRMG_GAME_H_

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace drmg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Steps, states, players and actions are 0-based throughout. Step h in code
// corresponds to step h+1 in the usual 1-based episodic notation.

inline constexpr double kKernelTolerance = 1e-10;
inline constexpr double kSimplexTolerance = 1e-12;

// Thrown when a game, kernel or policy fails a structural check at
// construction time.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Mixed-radix encoding of A_1 x ... x A_n. Joint action index
// a = a_1 + A_1 * (a_2 + A_2 * (...)), so player 0 varies fastest.
class JointActionSpace {
 public:
  JointActionSpace() = default;
  explicit JointActionSpace(std::vector<int> action_counts);

  int num_players() const { return static_cast<int>(counts_.size()); }
  int size() const { return size_; }
  int num_actions(int player) const { return counts_.at(player); }
  const std::vector<int>& action_counts() const { return counts_; }

  int encode(std::span<const int> actions) const;
  std::vector<int> decode(int joint) const;
  int component(int joint, int player) const;
  // Joint action equal to `joint` except that `player` plays `action`.
  int with_component(int joint, int player, int action) const;
  // Index of the joint action of everyone except `player`, in the space
  // obtained by dropping that player's coordinate.
  int others_index(int joint, int player) const;
  JointActionSpace without(int player) const;

  bool operator==(const JointActionSpace&) const = default;

 private:
  std::vector<int> counts_;
  std::vector<int> strides_;
  int size_ = 1;
};

// Everything needed to build a LinearMarkovGame. Features are stored one row
// per (state, joint action) pair, row index s * |A| + a.
struct GameDefinition {
  std::vector<int> action_counts;
  int num_states = 0;
  int horizon = 0;
  int initial_state = 0;
  std::optional<int> fail_state;
  Matrix features;                // (|S| * |A|) x d
  std::vector<Matrix> factors;    // per step, d x |S|; row j is mu0_{h,j}
  // rewards[i][h] is a vector over (state, joint action) pairs.
  std::vector<std::vector<Vector>> rewards;
  std::vector<std::string> state_names;  // optional, for reporting
};

// Expands linear reward parameters eta[i][h] (each a d-vector) into explicit
// reward tables r_{i,h}(s,a) = <phi(s,a), eta_{i,h}>.
std::vector<std::vector<Vector>> expand_linear_rewards(
    const Matrix& features, const std::vector<std::vector<Vector>>& eta);

// An n-player episodic game whose kernel is P_h(s'|s,a) = <phi(s,a),
// mu0_h(s')>. Immutable once constructed; shape errors throw
// std::invalid_argument, while value-level invariants (simplex rows,
// stochastic kernels, reward range, fail-state structure) are reported by
// validate().
class LinearMarkovGame {
 public:
  explicit LinearMarkovGame(GameDefinition def);

  int num_players() const { return actions_.num_players(); }
  int num_states() const { return def_.num_states; }
  int horizon() const { return def_.horizon; }
  int dimension() const { return static_cast<int>(def_.features.cols()); }
  int initial_state() const { return def_.initial_state; }
  std::optional<int> fail_state() const { return def_.fail_state; }
  const JointActionSpace& actions() const { return actions_; }
  int num_joint_actions() const { return actions_.size(); }
  const GameDefinition& definition() const { return def_; }

  int pair_index(int s, int a) const { return s * actions_.size() + a; }
  const Matrix& features() const { return def_.features; }
  auto feature(int s, int a) const { return def_.features.row(pair_index(s, a)); }
  const Matrix& factors(int h) const { return def_.factors.at(h); }
  double reward(int player, int h, int s, int a) const {
    return def_.rewards[player][h](pair_index(s, a));
  }
  const Vector& rewards(int player, int h) const { return def_.rewards.at(player).at(h); }
  std::string state_name(int s) const;

  void check_indices(int h, int s, int a) const;

 private:
  GameDefinition def_;
  JointActionSpace actions_;
};

// P_h(. | s, a) as a vector over states.
Vector transition_distribution(const LinearMarkovGame& game, int h, int s, int a);

// Uniform double in [0, 1) from the top 53 bits of one generator draw.
double uniform_unit(std::mt19937_64& rng);

// Draws an index from a discrete distribution by inverse CDF. Mass below
// zero is treated as zero.
int sample_index(const Vector& probs, std::mt19937_64& rng);

int sample_next_state(const LinearMarkovGame& game, int h, int s, int a,
                      std::mt19937_64& rng);

// Builds a linear game with one-hot features phi(s,a) = e_{(s,a)}; the factor
// row for (s,a) at step h is the input kernel row, so the induced kernel is
// the input kernel. kernels[h][s * |A| + a] is a distribution over states.
LinearMarkovGame tabular_embedding(
    int num_states, std::vector<int> action_counts,
    const std::vector<std::vector<Vector>>& kernels,
    std::vector<std::vector<Vector>> rewards, int horizon, int initial_state,
    std::optional<int> fail_state = std::nullopt,
    std::vector<std::string> state_names = {});

struct Violation {
  enum class Kind {
    kFeatureNegative,
    kFeatureSimplex,
    kFactorNegative,
    kFactorSimplex,
    kKernelNegative,
    kKernelSum,
    kRewardRange,
    kFailNotAbsorbing,
    kFailReward,
    kIndexRange,
  };
  Kind kind;
  int step = -1;
  int state = -1;
  int action = -1;
  int coordinate = -1;
  int player = -1;
  double residual = 0.0;

  std::string describe() const;
};

std::vector<Violation> validate(const LinearMarkovGame& game);

// A distribution over joint actions for every (step, state).
class JointPolicy {
 public:
  JointPolicy() = default;
  JointPolicy(int horizon, int num_states, int num_joint_actions);
  static JointPolicy uniform(const LinearMarkovGame& game);

  int horizon() const { return horizon_; }
  int num_states() const { return num_states_; }
  int num_joint_actions() const { return num_joint_; }

  Vector& at(int h, int s) { return probs_[h * num_states_ + s]; }
  const Vector& at(int h, int s) const { return probs_[h * num_states_ + s]; }

  // Throws ValidationError if any row is not a distribution.
  void check() const;

  bool operator==(const JointPolicy& other) const;

 private:
  int horizon_ = 0;
  int num_states_ = 0;
  int num_joint_ = 0;
  std::vector<Vector> probs_;
};

struct EpisodeRecord {
  std::vector<int> states;                    // s_h, length H
  std::vector<int> actions;                   // joint a_h, length H
  std::vector<std::vector<double>> rewards;   // [h][player]
  int final_state = -1;                       // s_{H+1}
};

// Rolls out one episode of `policy` on the game, starting at the initial
// state.
EpisodeRecord rollout(const LinearMarkovGame& game, const JointPolicy& policy,
                      std::mt19937_64& rng);

}  // namespace drmg

#endif  // DRMG_GAME_H_
