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

// Seeded training runs and the artifacts they produce.

#ifndef DRMG_EXPERIMENT_H_
#define DRMG_EXPERIMENT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "drmg/envs.h"
#include "drmg/eval.h"
#include "drmg/learner.h"

namespace drmg {

struct RunConfig {
  std::string env = "sim";
  EnvParams params;
  std::string algo = "drcce";  // or "baseline"
  int episodes = 2000;
  // Uncertainty levels. The robust learner trains with them; both algorithms
  // are scored against them in the regret curve.
  std::vector<double> sigma{0.3, 0.3};
  std::uint64_t seed = 0;
  double lambda = 1.0;
  double c_beta = 0.02;
  double delta = 0.1;
  std::optional<double> epsilon;
  std::optional<std::vector<double>> beta;
  std::vector<double> rho_grid;  // empty: no evaluation table
  int snapshot_stride = 1;

  LearnerConfig learner() const;
};

struct RunRecord {
  RunConfig config;
  std::vector<double> beta;
  std::vector<double> caps;
  double epsilon = 0.0;
  std::vector<int> policy_episodes;
  std::vector<JointPolicy> policies;
  std::vector<EpisodeRecord> trajectories;
  RegretCurve regret;
  std::vector<PerturbationRow> evaluation;
  std::optional<double> wall_clock_seconds;

  const JointPolicy& final_policy() const;
  // True when every episode's policy is stored.
  bool has_all_policies() const;
};

// Builds the environment, trains with a generator seeded by cfg.seed, scores
// every episode's policy with the exact oracles and, if a rho grid is given,
// evaluates the final policy under perturbation. Wall-clock time is recorded
// only on request so that records stay reproducible byte for byte.
RunRecord run_experiment(const RunConfig& cfg, bool record_time = false,
                         const EpisodeObserver& observer = {});

struct SweepRow {
  double rho = 0.0;
  std::string algo;
  int player = 0;
  double value = 0.0;    // seed-averaged V_{i,1}(s_1)
  double average = 0.0;  // seed-averaged cross-player average
};

// Re-evaluates each record's final policy over `rho_grid` on its own
// environment and averages over records of the same algorithm. Rows are
// ordered by algorithm (first appearance), then rho, then player.
std::vector<SweepRow> sweep(const std::vector<RunRecord>& records,
                            const std::vector<double>& rho_grid);

// {0, 0.1, ..., 0.5}.
std::vector<double> default_rho_grid();

}  // namespace drmg

#endif  // DRMG_EXPERIMENT_H_
