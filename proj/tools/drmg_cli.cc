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

// drmg: train, score and inspect robust linear Markov game learners.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "drmg/envs.h"
#include "drmg/eval.h"
#include "drmg/experiment.h"
#include "drmg/io.h"

namespace {

using namespace drmg;

EnvParams parse_params(const std::vector<std::string>& items) {
  EnvParams params;
  for (const std::string& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw CLI::ValidationError("--param", "expected key=value, got '" + item + "'");
    }
    try {
      params[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw CLI::ValidationError("--param", "value of '" + item + "' is not a number");
    }
  }
  return params;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_text(path, text);
  }
}

struct TrainOptions {
  std::string env = "sim";
  std::vector<std::string> params;
  std::string algo = "drcce";
  int episodes = 2000;
  std::vector<double> sigma{0.3, 0.3};
  std::vector<double> beta;
  double c_beta = RunConfig{}.c_beta;
  double lambda = 1.0;
  double delta = 0.1;
  std::optional<double> epsilon;
  std::optional<std::vector<double>> rho;
  int stride = 1;
};

void add_train_options(CLI::App* cmd, TrainOptions& o, bool with_algo) {
  cmd->add_option("--env", o.env, "Environment: sim, hardness, learnability")
      ->capture_default_str();
  cmd->add_option("--param", o.params, "Environment parameter key=value (repeatable)");
  if (with_algo) {
    cmd->add_option("--algo", o.algo, "drcce or baseline")
        ->check(CLI::IsMember({"drcce", "baseline"}))
        ->capture_default_str();
  }
  cmd->add_option("--K", o.episodes, "Episodes")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--sigma", o.sigma, "Per-player uncertainty levels")
      ->delimiter(',')
      ->capture_default_str();
  cmd->add_option("--beta", o.beta, "Per-player bonus scale, overrides the schedule")
      ->delimiter(',');
  cmd->add_option("--c-beta", o.c_beta, "Bonus schedule constant")->capture_default_str();
  cmd->add_option("--lambda", o.lambda, "Ridge regulariser")->capture_default_str();
  cmd->add_option("--delta", o.delta, "Confidence level in the bonus schedule")
      ->capture_default_str();
  cmd->add_option("--epsilon", o.epsilon, "CCE cover width (default 1/(K H))");
  cmd->add_option("--rho", o.rho, "Test-time perturbation grid (default 0,0.1,...,0.5 on sim)")
      ->delimiter(',');
  cmd->add_option("--stride", o.stride, "Store every n-th policy")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

RunConfig make_config(const TrainOptions& o, const std::string& algo, std::uint64_t seed) {
  RunConfig cfg;
  cfg.env = o.env;
  cfg.params = parse_params(o.params);
  cfg.algo = algo;
  cfg.episodes = o.episodes;
  cfg.sigma = o.sigma;
  cfg.seed = seed;
  cfg.lambda = o.lambda;
  cfg.c_beta = o.c_beta;
  cfg.delta = o.delta;
  cfg.epsilon = o.epsilon;
  if (!o.beta.empty()) cfg.beta = o.beta;
  if (o.rho) {
    cfg.rho_grid = *o.rho;
  } else if (o.env == "sim") {
    cfg.rho_grid = default_rho_grid();
  }
  cfg.snapshot_stride = o.stride;
  return cfg;
}

int run_hardness_demo(double p, double q, double sigma) {
  const HardnessPair pair = make_hardness_pair(p, q, sigma);
  const std::vector<double> sig{sigma, sigma};
  std::cout << "floor sigma*min{2p-1,1-2q} = " << format_double(pair.regret_floor) << "\n";
  double total = 0.0;
  for (int theta = 1; theta <= 2; ++theta) {
    const LinearMarkovGame& game = theta == 1 ? pair.first : pair.second;
    const JointPolicy uniform = JointPolicy::uniform(game);
    const ValueTables values = robust_policy_eval(game, uniform, sig);
    const int A = game.num_joint_actions();
    for (int i = 0; i < 2; ++i) {
      std::cout << "theta=" << theta << " player=" << i << " Q_step2(s_bad, a1a2):";
      for (int a = 0; a < A; ++a) {
        const auto acts = game.actions().decode(a);
        std::cout << " (" << acts[0] + 1 << acts[1] + 1 << ")="
                  << format_double(values.q[i][1](hardness::kBad * A + a));
      }
      const BestResponse br = robust_best_response(game, uniform, i, sigma);
      std::cout << " best_response_at_s_bad=" << br.action[1][hardness::kBad] + 1 << "\n";
    }
    const std::vector<double> gaps = policy_gaps(game, uniform, sig, game.initial_state());
    for (int i = 0; i < 2; ++i) {
      std::cout << "theta=" << theta << " player=" << i
                << " uniform-policy gap = " << format_double(gaps[i]) << "\n";
      total += gaps[i];
    }
  }
  std::cout << "summed gap = " << format_double(total) << " ("
            << (total >= pair.regret_floor - 1e-9 ? ">=" : "<") << " floor)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributionally robust learning in linear Markov games"};
  app.require_subcommand(1);

  // train
  TrainOptions train_opts;
  std::optional<std::uint64_t> train_seed;
  std::string train_out;
  std::string train_csv;
  bool record_time = false;
  auto* train = app.add_subcommand("train", "Train one learner and write a run record");
  add_train_options(train, train_opts, true);
  train->add_option("--seed", train_seed, "Random seed")->required();
  train->add_option("--out", train_out, "Run record path")->required();
  train->add_option("--regret-csv", train_csv, "Also write the regret curve CSV here");
  train->add_flag("--record-time", record_time, "Store wall-clock seconds in the record");

  // regret
  std::string regret_record;
  std::string regret_out;
  auto* regret = app.add_subcommand("regret", "Per-episode regret CSV of a run record");
  regret->add_option("record", regret_record, "Run record path")->required();
  regret->add_option("--out", regret_out, "CSV path (default stdout)");

  // sweep
  TrainOptions sweep_opts;
  std::vector<std::string> sweep_records;
  std::vector<std::uint64_t> sweep_seeds;
  std::vector<std::string> sweep_algos{"drcce", "baseline"};
  std::vector<double> sweep_rho = default_rho_grid();
  std::string sweep_out;
  auto* sweep_cmd = app.add_subcommand(
      "sweep", "Seed-averaged returns under test-time perturbation, from records or fresh runs");
  sweep_cmd->add_option("--records", sweep_records, "Run record paths");
  add_train_options(sweep_cmd, sweep_opts, false);
  sweep_cmd->add_option("--seeds", sweep_seeds, "Train one run per seed and algorithm")
      ->delimiter(',');
  sweep_cmd->add_option("--algos", sweep_algos, "Algorithms to train")
      ->delimiter(',')
      ->check(CLI::IsMember({"drcce", "baseline"}))
      ->capture_default_str();
  sweep_cmd->add_option("--grid", sweep_rho, "Evaluation perturbation grid")
      ->delimiter(',')
      ->capture_default_str();
  sweep_cmd->add_option("--out", sweep_out, "CSV path (default stdout)");

  // hardness-demo
  double hp = 0.8, hq = 0.2, hsigma = 0.1;
  auto* hardness_cmd =
      app.add_subcommand("hardness-demo", "Closed-form floor and oracle gaps on the hard pair");
  hardness_cmd->add_option("--p", hp)->capture_default_str();
  hardness_cmd->add_option("--q", hq)->capture_default_str();
  hardness_cmd->add_option("--sigma", hsigma)->capture_default_str();

  // validate
  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "List structural violations of a game");
  validate_cmd->add_option("game", validate_path, "Game document path")->required();

  // env
  std::string env_name = "sim";
  std::vector<std::string> env_params;
  std::string env_out;
  auto* env_cmd = app.add_subcommand("env", "Write a built-in environment as a game document");
  env_cmd->add_option("--env", env_name)->capture_default_str();
  env_cmd->add_option("--param", env_params, "Environment parameter key=value (repeatable)");
  env_cmd->add_option("--out", env_out, "Output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train) {
      const RunConfig cfg = make_config(train_opts, train_opts.algo, *train_seed);
      const RunRecord record = run_experiment(cfg, record_time);
      write_text(train_out, dump_document(run_record_to_json(record)));
      if (!train_csv.empty()) write_text(train_csv, regret_csv(record.regret));
      return 0;
    }
    if (*regret) {
      RunRecord record = run_record_from_json(read_document(regret_record));
      if (record.has_all_policies()) {
        const LinearMarkovGame game = make_env(record.config.env, record.config.params);
        std::vector<int> starts;
        for (const EpisodeRecord& ep : record.trajectories) starts.push_back(ep.states.front());
        record.regret = regret_curve(game, record.policies, record.config.sigma, starts);
      }
      emit(regret_out, regret_csv(record.regret));
      return 0;
    }
    if (*sweep_cmd) {
      if (sweep_records.empty() == sweep_seeds.empty()) {
        std::cerr << "sweep: give exactly one of --records or --seeds\n" << sweep_cmd->help();
        return 1;
      }
      std::vector<RunRecord> records;
      for (const std::string& path : sweep_records) {
        records.push_back(run_record_from_json(read_document(path)));
      }
      for (const std::string& algo : sweep_algos) {
        for (std::uint64_t seed : sweep_seeds) {
          RunConfig cfg = make_config(sweep_opts, algo, seed);
          cfg.rho_grid.clear();
          records.push_back(run_experiment(cfg));
        }
      }
      emit(sweep_out, sweep_csv(sweep(records, sweep_rho)));
      return 0;
    }
    if (*hardness_cmd) return run_hardness_demo(hp, hq, hsigma);
    if (*validate_cmd) {
      const LinearMarkovGame game = game_from_json(read_document(validate_path));
      const std::vector<Violation> violations = validate(game);
      for (const Violation& v : violations) std::cout << v.describe() << "\n";
      if (violations.empty()) std::cout << "ok\n";
      return violations.empty() ? 0 : 3;
    }
    if (*env_cmd) {
      emit(env_out, dump_document(game_to_json(make_env(env_name, parse_params(env_params)))));
      return 0;
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
