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

#include "drmg/learner.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace drmg {

GramState::GramState(int horizon, int dimension, int num_states, double lambda)
    : dimension_(dimension),
      lambda_(lambda),
      gram_(horizon, lambda * Matrix::Identity(dimension, dimension)),
      successor_sums_(horizon, Matrix::Zero(dimension, num_states)),
      features_(horizon),
      successors_(horizon),
      inverse_(horizon, Matrix::Identity(dimension, dimension) / lambda),
      stale_(horizon, false) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
}

void GramState::add(int h, const Vector& phi, int next_state) {
  if (phi.size() != dimension_) throw std::invalid_argument("feature has wrong dimension");
  gram_.at(h).noalias() += phi * phi.transpose();
  successor_sums_.at(h).col(next_state) += phi;
  features_[h].push_back(phi);
  successors_[h].push_back(next_state);
  stale_[h] = true;
}

const Matrix& GramState::inverse(int h) const {
  if (stale_.at(h)) {
    inverse_[h] = gram_[h].llt().solve(Matrix::Identity(dimension_, dimension_));
    stale_[h] = false;
  }
  return inverse_[h];
}

Matrix GramState::rebuild(int h) const {
  Matrix out = lambda_ * Matrix::Identity(dimension_, dimension_);
  for (const Vector& phi : features_.at(h)) out.noalias() += phi * phi.transpose();
  return out;
}

void LearnerConfig::check(int num_players) const {
  if (episodes < 1) throw std::invalid_argument("K must be at least 1");
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
  if (epsilon && !(*epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (static_cast<int>(sigma.size()) != num_players) {
    throw std::invalid_argument("one uncertainty level per player required");
  }
  for (double s : sigma) {
    if (!(s >= 0.0 && s <= 1.0)) throw std::invalid_argument("sigma must lie in [0,1]");
  }
  if (beta && static_cast<int>(beta->size()) != num_players) {
    throw std::invalid_argument("one beta per player required");
  }
  if (snapshot_stride < 1) throw std::invalid_argument("snapshot stride must be positive");
}

double LearnerConfig::cover_width(int horizon) const {
  return epsilon ? *epsilon : 1.0 / (static_cast<double>(episodes) * horizon);
}

double value_cap(double sigma, int horizon) {
  return sigma > 0.0 ? std::min(static_cast<double>(horizon), 1.0 / sigma)
                     : static_cast<double>(horizon);
}

double beta_schedule(double sigma, int num_players, int dimension, int horizon,
                     int episodes, double delta, double c_beta) {
  const double ndhk = static_cast<double>(num_players) * dimension * horizon * episodes;
  return value_cap(sigma, horizon) *
         std::sqrt(c_beta * num_players * dimension * std::log(ndhk / delta));
}

Vector ridge_clipped_estimate(const GramState& gram, int h, const Vector& values,
                              double alpha) {
  if (alpha < 0.0) throw std::invalid_argument("clip level must be nonnegative");
  return gram.inverse(h) * (gram.successor_sums(h) * values.cwiseMin(alpha));
}

Vector robust_weight(const GramState& gram, int h, const Vector& values, double sigma,
                     double cap) {
  const int d = gram.dimension();
  if (gram.count(h) == 0) return Vector::Zero(d);
  // A zero radius leaves nothing to dualise; the weight is the ridge fit at the cap.
  if (sigma == 0.0) return ridge_clipped_estimate(gram, h, values, cap);

  // coef(j, s') = (Lambda^{-1} F)_{j s'}; nu_j(alpha) = sum_s' coef * min(V, alpha).
  const Matrix coef = gram.inverse(h) * gram.successor_sums(h);
  std::vector<double> alphas{0.0, cap};
  const Matrix& sums = gram.successor_sums(h);
  for (int s = 0; s < values.size(); ++s) {
    if (sums.col(s).isZero(0.0)) continue;
    if (values(s) > 0.0 && values(s) < cap) alphas.push_back(values(s));
  }
  std::sort(alphas.begin(), alphas.end());
  alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());

  Matrix objective(d, alphas.size());
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    objective.col(k) = coef * values.cwiseMin(alphas[k]);
    objective.col(k).array() -= sigma * alphas[k];
  }
  Vector w(d);
  for (int j = 0; j < d; ++j) {
    Eigen::Index best;
    w(j) = objective.row(j).maxCoeff(&best);  // first maximiser, i.e. smallest alpha
  }
  return w;
}

double bonus(const Vector& phi, const GramState& gram, int h, double beta) {
  return beta * phi.dot(gram.inverse(h).diagonal().cwiseSqrt());
}

double elliptical_bonus(const Vector& phi, const GramState& gram, int h, double beta) {
  return beta * std::sqrt(phi.dot(gram.inverse(h) * phi));
}

Vector q_update(const LinearMarkovGame& game, const GramState& gram, int h, int player,
                const Vector& next_values, double sigma, double beta, LearnerMode mode) {
  const Matrix& phi = game.features();
  const int H = game.horizon();
  Vector q;
  double cap;
  if (mode == LearnerMode::kRobust) {
    cap = value_cap(sigma, H);
    const Vector w = robust_weight(gram, h, next_values, sigma, cap);
    const Vector widths = gram.inverse(h).diagonal().cwiseSqrt();
    q = game.rewards(player, h) + phi * w + beta * (phi * widths);
  } else {
    cap = static_cast<double>(H);
    const Vector w = ridge_clipped_estimate(gram, h, next_values, cap);
    const Vector quad = (phi * gram.inverse(h)).cwiseProduct(phi).rowwise().sum();
    q = game.rewards(player, h) + phi * w + beta * quad.cwiseMax(0.0).cwiseSqrt();
  }
  return q.cwiseMax(0.0).cwiseMin(cap);
}

TrainResult train(const LinearMarkovGame& game, const LearnerConfig& cfg,
                  std::mt19937_64& rng, const EpisodeObserver& observer) {
  const int n = game.num_players();
  const int H = game.horizon();
  const int S = game.num_states();
  const int A = game.num_joint_actions();
  const int d = game.dimension();
  cfg.check(n);
  if (const auto violations = validate(game); !violations.empty()) {
    throw ValidationError("game fails validation: " + violations.front().describe());
  }
  if (cfg.behavior_policy) {
    if (cfg.behavior_policy->horizon() != H || cfg.behavior_policy->num_states() != S ||
        cfg.behavior_policy->num_joint_actions() != A) {
      throw std::invalid_argument("behavior policy does not match the game");
    }
    cfg.behavior_policy->check();
  }

  const bool robust = cfg.mode == LearnerMode::kRobust;
  TrainResult out(GramState(H, d, S, cfg.lambda));
  out.epsilon = cfg.cover_width(H);
  for (int i = 0; i < n; ++i) {
    const double sigma = robust ? cfg.sigma[i] : 0.0;
    out.caps.push_back(value_cap(sigma, H));
    out.beta.push_back(cfg.beta ? (*cfg.beta)[i]
                                : beta_schedule(sigma, n, d, H, cfg.episodes, cfg.delta,
                                                cfg.c_beta));
  }
  const double tensor_cap = *std::max_element(out.caps.begin(), out.caps.end());

  EpisodeEstimates est;
  est.q.assign(n, std::vector<Vector>(H));
  est.v.assign(n, std::vector<Vector>(H));
  PayoffTensor tensor{game.actions(), std::vector<Vector>(n, Vector(A)), tensor_cap};

  for (int k = 0; k < cfg.episodes; ++k) {
    est.episode = k;
    est.policy = JointPolicy(H, S, A);
    for (int h = H - 1; h >= 0; --h) {
      for (int i = 0; i < n; ++i) {
        const Vector next = h + 1 < H ? est.v[i][h + 1] : Vector::Zero(S);
        est.q[i][h] = q_update(game, out.gram, h, i, next, robust ? cfg.sigma[i] : 0.0,
                               out.beta[i], cfg.mode);
        est.v[i][h] = Vector::Zero(S);
      }
      for (int s = 0; s < S; ++s) {
        for (int i = 0; i < n; ++i) tensor.payoffs[i] = est.q[i][h].segment(s * A, A);
        Vector pi;
        try {
          pi = find_cce(tensor, out.epsilon);
        } catch (const SolverError& e) {
          std::ostringstream msg;
          msg << "episode " << k << ", step " << h << ", state " << s << ": " << e.what();
          throw SolverError(msg.str());
        }
        for (int i = 0; i < n; ++i) est.v[i][h](s) = pi.dot(tensor.payoffs[i]);
        est.policy.at(h, s) = std::move(pi);
      }
    }
    if (observer) observer(est, out.gram);

    if (k % cfg.snapshot_stride == 0 || k + 1 == cfg.episodes) {
      out.policy_episodes.push_back(k);
      out.policies.push_back(est.policy);
    }

    const JointPolicy& behavior = cfg.behavior_policy ? *cfg.behavior_policy : est.policy;
    EpisodeRecord ep = rollout(game, behavior, rng);
    for (int h = 0; h < H; ++h) {
      const int next = h + 1 < H ? ep.states[h + 1] : ep.final_state;
      out.gram.add(h, game.feature(ep.states[h], ep.actions[h]).transpose(), next);
    }
    out.trajectories.push_back(std::move(ep));
  }
  out.final_estimates = std::move(est);
  return out;
}

TrainResult train_baseline(const LinearMarkovGame& game, LearnerConfig cfg,
                           std::mt19937_64& rng, const EpisodeObserver& observer) {
  cfg.mode = LearnerMode::kBaseline;
  return train(game, cfg, rng, observer);
}

}  // namespace drmg
