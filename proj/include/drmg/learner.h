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

// Online least-squares value iteration for linear Markov games.
//
// The robust learner keeps one regularised Gram matrix per step. Each episode
// it runs a backward pass that, for every player, fits clipped successor
// values by ridge regression, takes the per-coordinate dual maximum over the
// clip level, adds a sum-of-coordinates optimism bonus and clamps to the
// value cap min{H, 1/sigma_i}. A CCE of the resulting per-state payoff game
// (rounded to an eps-grid first) becomes the policy, which then collects one
// trajectory.
//
// The baseline shares the loop but regresses unclipped values with no robust
// penalty, uses the elliptical bonus beta * ||phi||_{Lambda^-1} and caps at H.

#ifndef DRMG_LEARNER_H_
#define DRMG_LEARNER_H_

#include <functional>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "drmg/cce.h"
#include "drmg/game.h"

namespace drmg {

// Per-step design matrices Lambda_h = lambda I + sum_tau phi phi^T, along with
// the visited features and successor states.
class GramState {
 public:
  GramState(int horizon, int dimension, int num_states, double lambda);

  int horizon() const { return static_cast<int>(gram_.size()); }
  int dimension() const { return dimension_; }
  double lambda() const { return lambda_; }
  int count(int h) const { return static_cast<int>(successors_.at(h).size()); }

  void add(int h, const Vector& phi, int next_state);

  const Matrix& gram(int h) const { return gram_.at(h); }
  // Lambda_h^{-1}; recomputed by Cholesky after updates.
  const Matrix& inverse(int h) const;
  // d x |S| matrix whose column s' is sum_tau phi_tau [s_{h+1}^tau == s'].
  const Matrix& successor_sums(int h) const { return successor_sums_.at(h); }
  const std::vector<Vector>& features(int h) const { return features_.at(h); }
  const std::vector<int>& successors(int h) const { return successors_.at(h); }

  // lambda I + sum of outer products, recomputed from the stored features.
  Matrix rebuild(int h) const;

 private:
  int dimension_;
  double lambda_;
  std::vector<Matrix> gram_;
  std::vector<Matrix> successor_sums_;
  std::vector<std::vector<Vector>> features_;
  std::vector<std::vector<int>> successors_;
  mutable std::vector<Matrix> inverse_;
  mutable std::vector<bool> stale_;
};

enum class LearnerMode { kRobust, kBaseline };

struct LearnerConfig {
  int episodes = 1;
  double lambda = 1.0;
  std::vector<double> sigma;  // per player
  double c_beta = 0.02;
  double delta = 0.1;
  std::optional<double> epsilon;             // default 1 / (K H)
  std::optional<std::vector<double>> beta;   // overrides the schedule
  LearnerMode mode = LearnerMode::kRobust;
  int snapshot_stride = 1;                   // keep every n-th policy (and the last)
  // When set, trajectories are collected with this policy instead of the
  // learned one. Learning itself is unchanged.
  std::optional<JointPolicy> behavior_policy;

  void check(int num_players) const;
  double cover_width(int horizon) const;
};

// min{H, 1/sigma}; H when sigma == 0.
double value_cap(double sigma, int horizon);

// cap * sqrt(c_beta * n * d * log(n d H K / delta)).
double beta_schedule(double sigma, int num_players, int dimension, int horizon,
                     int episodes, double delta, double c_beta);

// Lambda_h^{-1} sum_tau phi_tau min(V(s'_tau), alpha).
Vector ridge_clipped_estimate(const GramState& gram, int h, const Vector& values,
                              double alpha);

// Coordinate j is max_{alpha in [0, cap]} { nu_j(alpha) - sigma alpha }, with
// nu the ridge estimate above. nu_j is piecewise linear with kinks at the
// observed successor values, so the maximum is taken over those and {0, cap}.
// With sigma == 0 it is the ridge estimate at alpha = cap.
Vector robust_weight(const GramState& gram, int h, const Vector& values, double sigma,
                     double cap);

// beta * sum_j phi_j sqrt((Lambda_h^{-1})_jj).
double bonus(const Vector& phi, const GramState& gram, int h, double beta);

// beta * sqrt(phi^T Lambda_h^{-1} phi).
double elliptical_bonus(const Vector& phi, const GramState& gram, int h, double beta);

// Optimistic Q table over (state, joint action) pairs for player i at step h,
// given that player's next-step value estimate.
Vector q_update(const LinearMarkovGame& game, const GramState& gram, int h, int player,
                const Vector& next_values, double sigma, double beta,
                LearnerMode mode = LearnerMode::kRobust);

// State of one backward pass, passed to the optional observer.
struct EpisodeEstimates {
  int episode = 0;  // 0-based
  std::vector<std::vector<Vector>> q;  // [player][h] over pairs
  std::vector<std::vector<Vector>> v;  // [player][h] over states
  JointPolicy policy;
};

using EpisodeObserver =
    std::function<void(const EpisodeEstimates&, const GramState&)>;

struct TrainResult {
  explicit TrainResult(GramState g) : gram(std::move(g)) {}

  std::vector<int> policy_episodes;       // 0-based episode of each snapshot
  std::vector<JointPolicy> policies;
  std::vector<EpisodeRecord> trajectories;
  EpisodeEstimates final_estimates;
  std::vector<double> beta;
  std::vector<double> caps;
  double epsilon = 0.0;
  GramState gram;
};

// Runs K episodes on `game`. The game must validate cleanly.
TrainResult train(const LinearMarkovGame& game, const LearnerConfig& cfg,
                  std::mt19937_64& rng, const EpisodeObserver& observer = {});

// train() with the mode forced to kBaseline.
TrainResult train_baseline(const LinearMarkovGame& game, LearnerConfig cfg,
                           std::mt19937_64& rng, const EpisodeObserver& observer = {});

}  // namespace drmg

#endif  // DRMG_LEARNER_H_
