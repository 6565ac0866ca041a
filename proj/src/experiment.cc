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

#include "drmg/experiment.h"

#include <algorithm>
#include <chrono>
#include <random>
#include <stdexcept>

namespace drmg {

LearnerConfig RunConfig::learner() const {
  LearnerConfig cfg;
  cfg.episodes = episodes;
  cfg.lambda = lambda;
  cfg.sigma = sigma;
  cfg.c_beta = c_beta;
  cfg.delta = delta;
  cfg.epsilon = epsilon;
  cfg.beta = beta;
  cfg.snapshot_stride = snapshot_stride;
  if (algo == "drcce") {
    cfg.mode = LearnerMode::kRobust;
  } else if (algo == "baseline") {
    cfg.mode = LearnerMode::kBaseline;
  } else {
    throw std::invalid_argument("unknown algorithm '" + algo + "'");
  }
  return cfg;
}

const JointPolicy& RunRecord::final_policy() const {
  if (policies.empty()) throw std::logic_error("record holds no policies");
  return policies.back();
}

bool RunRecord::has_all_policies() const {
  return static_cast<int>(policies.size()) == config.episodes;
}

RunRecord run_experiment(const RunConfig& cfg, bool record_time,
                         const EpisodeObserver& observer) {
  const auto start = std::chrono::steady_clock::now();
  const LinearMarkovGame game = make_env(cfg.env, cfg.params);
  const LearnerConfig learner = cfg.learner();
  if (static_cast<int>(cfg.sigma.size()) != game.num_players()) {
    throw std::invalid_argument("one uncertainty level per player required");
  }

  RunRecord record;
  record.config = cfg;
  std::mt19937_64 rng(cfg.seed);
  auto score = [&](const EpisodeEstimates& est, const GramState& gram) {
    record.regret.append(policy_gaps(game, est.policy, cfg.sigma, game.initial_state()));
    if (observer) observer(est, gram);
  };
  TrainResult result = train(game, learner, rng, score);

  record.beta = result.beta;
  record.caps = result.caps;
  record.epsilon = result.epsilon;
  record.policy_episodes = std::move(result.policy_episodes);
  record.policies = std::move(result.policies);
  record.trajectories = std::move(result.trajectories);
  if (!cfg.rho_grid.empty()) {
    record.evaluation = evaluate_under_perturbation(perturbation_family(cfg.env, cfg.params),
                                                    record.final_policy(), cfg.rho_grid);
  }
  if (record_time) {
    record.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return record;
}

std::vector<SweepRow> sweep(const std::vector<RunRecord>& records,
                            const std::vector<double>& rho_grid) {
  std::vector<std::string> algos;
  for (const RunRecord& r : records) {
    if (std::find(algos.begin(), algos.end(), r.config.algo) == algos.end()) {
      algos.push_back(r.config.algo);
    }
  }
  std::vector<SweepRow> rows;
  for (const std::string& algo : algos) {
    std::vector<std::vector<PerturbationRow>> tables;
    for (const RunRecord& r : records) {
      if (r.config.algo != algo) continue;
      tables.push_back(evaluate_under_perturbation(
          perturbation_family(r.config.env, r.config.params), r.final_policy(), rho_grid));
    }
    const int n = static_cast<int>(tables.front().front().values.size());
    for (std::size_t g = 0; g < rho_grid.size(); ++g) {
      double average = 0.0;
      std::vector<double> values(n, 0.0);
      for (const auto& table : tables) {
        if (static_cast<int>(table[g].values.size()) != n) {
          throw std::invalid_argument("records of one algorithm disagree on the player count");
        }
        for (int i = 0; i < n; ++i) values[i] += table[g].values[i];
        average += table[g].average;
      }
      const double m = static_cast<double>(tables.size());
      for (int i = 0; i < n; ++i) {
        rows.push_back(SweepRow{rho_grid[g], algo, i, values[i] / m, average / m});
      }
    }
  }
  return rows;
}

std::vector<double> default_rho_grid() { return {0.0, 0.1, 0.2, 0.3, 0.4, 0.5}; }

}  // namespace drmg
