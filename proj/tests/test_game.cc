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

#include <cmath>
#include <random>

#include <doctest.h>

#include "drmg/envs.h"
#include "drmg/game.h"
#include "oracles.h"

using namespace drmg;
using drmg::testing::random_distribution;
using drmg::testing::random_tabular_game;

namespace {

bool has_kind(const std::vector<Violation>& vs, Violation::Kind kind) {
  for (const auto& v : vs) {
    if (v.kind == kind) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("joint action space encodes with player 0 fastest") {
  const JointActionSpace sp({2, 3, 2});
  CHECK(sp.size() == 12);
  for (int a = 0; a < sp.size(); ++a) {
    const auto acts = sp.decode(a);
    CHECK(sp.encode(acts) == a);
    CHECK(a == acts[0] + 2 * (acts[1] + 3 * acts[2]));
    for (int i = 0; i < 3; ++i) CHECK(sp.component(a, i) == acts[i]);
  }
  CHECK(sp.with_component(0, 1, 2) == 4);
  const JointActionSpace rest = sp.without(1);
  CHECK(rest.action_counts() == std::vector<int>{2, 2});
  CHECK(sp.others_index(sp.encode(std::vector<int>{1, 2, 1}), 1) == 1 + 2 * 1);
  CHECK(JointActionSpace({4}).without(0).size() == 1);
}

TEST_CASE("sim game kernel from s0 under (1,1)") {
  const LinearMarkovGame g = make_sim_game(0.0);
  const int a11 = g.actions().encode(std::vector<int>{1, 1});
  const Vector p = transition_distribution(g, 0, sim::kStart, a11);
  CHECK(p(sim::kPlayerOneGoal) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(p(sim::kPlayerTwoGoal) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(p(sim::kFail) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(p(sim::kNeutral) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(p(sim::kStart) == 0.0);
}

TEST_CASE("fail state transitions are Dirac") {
  const LinearMarkovGame g = make_sim_game(0.3);
  for (int h = 0; h < g.horizon(); ++h) {
    for (int a = 0; a < g.num_joint_actions(); ++a) {
      const Vector p = transition_distribution(g, h, sim::kFail, a);
      CHECK(p(sim::kFail) == 1.0);
      CHECK(p.sum() == 1.0);
    }
  }
}

TEST_CASE("transition_distribution rejects bad indices") {
  const LinearMarkovGame g = make_sim_game(0.0);
  CHECK_THROWS_AS(transition_distribution(g, 3, 0, 0), std::out_of_range);
  CHECK_THROWS_AS(transition_distribution(g, 0, 5, 0), std::out_of_range);
  CHECK_THROWS_AS(transition_distribution(g, 0, 0, 4), std::out_of_range);
  CHECK_THROWS_AS(transition_distribution(g, -1, 0, 0), std::out_of_range);
}

TEST_CASE("tabular embedding reproduces the source kernel exactly") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int S = trial % 2 == 0 ? 3 : 4;
    const std::vector<int> counts{2};
    const int H = 2;
    std::vector<std::vector<Vector>> kernels(H, std::vector<Vector>(S * 2));
    for (auto& step : kernels) {
      for (auto& row : step) row = random_distribution(S, rng, 0.2);
    }
    std::vector<std::vector<Vector>> rewards(1, std::vector<Vector>(H, Vector::Zero(S * 2)));
    const LinearMarkovGame g = tabular_embedding(S, counts, kernels, rewards, H, 0);
    CHECK(g.dimension() == S * 2);
    CHECK(validate(g).empty());
    for (int h = 0; h < H; ++h) {
      for (int s = 0; s < S; ++s) {
        for (int a = 0; a < 2; ++a) {
          const Vector p = transition_distribution(g, h, s, a);
          CHECK((p - kernels[h][s * 2 + a]).cwiseAbs().maxCoeff() <= 1e-15);
          CHECK(g.feature(s, a).sum() == 1.0);
          CHECK(g.feature(s, a)(s * 2 + a) == 1.0);
        }
      }
    }
  }
}

TEST_CASE("identity kernel embeds as Dirac transitions") {
  const int S = 2;
  std::vector<std::vector<Vector>> kernels(1, std::vector<Vector>(S));
  kernels[0][0] = Vector::Unit(2, 0);
  kernels[0][1] = Vector::Unit(2, 1);
  std::vector<std::vector<Vector>> rewards(1, std::vector<Vector>(1, Vector::Zero(S)));
  const LinearMarkovGame g = tabular_embedding(S, {1}, kernels, rewards, 1, 0);
  CHECK(transition_distribution(g, 0, 0, 0) == Vector::Unit(2, 0));
  CHECK(transition_distribution(g, 0, 1, 0) == Vector::Unit(2, 1));
}

TEST_CASE("tabular embedding rejects non-stochastic rows") {
  std::vector<std::vector<Vector>> kernels(1, std::vector<Vector>(2));
  kernels[0][0] = Vector::Unit(2, 0);
  kernels[0][1] = Vector::Constant(2, 0.6);
  std::vector<std::vector<Vector>> rewards(1, std::vector<Vector>(1, Vector::Zero(2)));
  CHECK_THROWS_AS(tabular_embedding(2, {1}, kernels, rewards, 1, 0), ValidationError);
  kernels[0][1] << 1.5, -0.5;
  CHECK_THROWS_AS(tabular_embedding(2, {1}, kernels, rewards, 1, 0), ValidationError);
}

TEST_CASE("hardness instance embeds the p-transition out of the bad state") {
  const HardnessPair pair = make_hardness_pair(0.8, 0.2, 0.1);
  const int a11 = pair.first.actions().encode(std::vector<int>{0, 0});
  const Vector p = transition_distribution(pair.first, 1, hardness::kBad, a11);
  CHECK(p(hardness::kGoodOne) == doctest::Approx(0.8));
  CHECK(p(hardness::kGoodTwo) == doctest::Approx(0.2));
}

TEST_CASE("validate accepts the built-in environments") {
  CHECK(validate(make_sim_game(0.0)).empty());
  CHECK(validate(make_sim_game(1.0)).empty());
  CHECK(validate(make_learnability_mdp()).empty());
  const HardnessPair pair = make_hardness_pair();
  CHECK(validate(pair.first).empty());
  CHECK(validate(pair.second).empty());
}

TEST_CASE("validate reports a feature row scaled by two") {
  GameDefinition def = make_sim_game(0.0).definition();
  def.features.row(7) *= 2.0;
  const auto vs = validate(LinearMarkovGame(def));
  REQUIRE(!vs.empty());
  CHECK(has_kind(vs, Violation::Kind::kFeatureSimplex));
  bool located = false;
  for (const auto& v : vs) {
    if (v.kind == Violation::Kind::kFeatureSimplex) {
      located = v.state == 1 && v.action == 3 && std::abs(v.residual - 1.0) < 1e-12;
    }
  }
  CHECK(located);
}

TEST_CASE("validate reports a negative factor entry") {
  GameDefinition def = make_sim_game(0.0).definition();
  def.factors[1](3, sim::kNeutral) = 1.2;
  def.factors[1](3, sim::kStart) = -0.2;
  const auto vs = validate(LinearMarkovGame(def));
  CHECK(has_kind(vs, Violation::Kind::kFactorNegative));
  for (const auto& v : vs) {
    if (v.kind == Violation::Kind::kFactorNegative) {
      CHECK(v.step == 1);
      CHECK(v.coordinate == 3);
      CHECK(v.state == sim::kStart);
    }
  }
}

TEST_CASE("validate reports reward range and fail-state structure") {
  GameDefinition def = make_sim_game(0.0).definition();
  def.rewards[0][2](sim::kFail * 4 + 1) = 0.5;
  def.rewards[1][0](0) = 1.5;
  const auto vs = validate(LinearMarkovGame(def));
  CHECK(has_kind(vs, Violation::Kind::kFailReward));
  CHECK(has_kind(vs, Violation::Kind::kRewardRange));

  GameDefinition leaky = make_sim_game(0.0).definition();
  leaky.factors[0](2, sim::kFail) = 0.9;
  leaky.factors[0](2, sim::kNeutral) = 0.1;
  CHECK(has_kind(validate(LinearMarkovGame(leaky)), Violation::Kind::kFailNotAbsorbing));
}

TEST_CASE("constructor rejects shape errors") {
  GameDefinition def = make_sim_game(0.0).definition();
  def.factors.pop_back();
  CHECK_THROWS_AS(LinearMarkovGame{def}, std::invalid_argument);
  def = make_sim_game(0.0).definition();
  def.features.conservativeResize(def.features.rows() - 1, Eigen::NoChange);
  CHECK_THROWS_AS(LinearMarkovGame{def}, std::invalid_argument);
}

TEST_CASE("kernel rows of random linear games sum to one") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    const LinearMarkovGame g = drmg::testing::random_linear_game(rng, 5, 3, {2, 2}, 2);
    for (int h = 0; h < g.horizon(); ++h) {
      for (int s = 0; s < g.num_states(); ++s) {
        for (int a = 0; a < g.num_joint_actions(); ++a) {
          CHECK(std::abs(transition_distribution(g, h, s, a).sum() - 1.0) <= 1e-10);
        }
      }
    }
  }
}

TEST_CASE("linear rewards expand to tables") {
  const LinearMarkovGame g = make_sim_game(0.0);
  std::vector<std::vector<Vector>> eta(1, std::vector<Vector>(2, Vector::Zero(4)));
  eta[0][0] << 1.0, 0.0, 0.0, 0.5;
  eta[0][1] << 0.0, 0.25, 0.0, 0.0;
  const auto tables = expand_linear_rewards(g.features(), eta);
  const int a = 3;
  const int pair = g.pair_index(sim::kStart, a);
  CHECK(tables[0][0](pair) == doctest::Approx(g.feature(sim::kStart, a).dot(eta[0][0])));
  CHECK(tables[0][1](g.pair_index(sim::kPlayerTwoGoal, 0)) == 0.25);
}

TEST_CASE("sampling a Dirac transition returns its support") {
  const LinearMarkovGame g = make_sim_game(0.0);
  std::mt19937_64 rng(3);
  for (int k = 0; k < 100; ++k) {
    CHECK(sample_next_state(g, 0, sim::kPlayerOneGoal, k % 4, rng) == sim::kPlayerOneGoal);
  }
}

TEST_CASE("sampling is a pure function of the seed") {
  const LinearMarkovGame g = make_sim_game(0.2);
  std::mt19937_64 r1(99), r2(99);
  for (int k = 0; k < 200; ++k) {
    CHECK(sample_next_state(g, 0, sim::kStart, k % 4, r1) ==
          sample_next_state(g, 0, sim::kStart, k % 4, r2));
  }
}

TEST_CASE("empirical transition frequencies match the kernel") {
  const LinearMarkovGame g = make_sim_game(0.0);
  const int a = g.actions().encode(std::vector<int>{1, 0});
  const Vector p = transition_distribution(g, 0, sim::kStart, a);
  std::mt19937_64 rng(2024);
  const int n = 100000;
  Vector counts = Vector::Zero(g.num_states());
  for (int k = 0; k < n; ++k) counts(sample_next_state(g, 0, sim::kStart, a, rng)) += 1.0;
  for (int s = 0; s < g.num_states(); ++s) {
    const double se = std::sqrt(p(s) * (1.0 - p(s)) / n);
    CHECK(std::abs(counts(s) / n - p(s)) <= 3.0 * se + 1e-12);
  }
}

TEST_CASE("uniform_unit stays in [0,1)") {
  std::mt19937_64 rng(0);
  for (int k = 0; k < 10000; ++k) {
    const double u = uniform_unit(rng);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("rollout produces an H-step record within index ranges") {
  const LinearMarkovGame g = make_sim_game(0.0);
  const JointPolicy pi = JointPolicy::uniform(g);
  std::mt19937_64 rng(8);
  for (int k = 0; k < 50; ++k) {
    const EpisodeRecord ep = rollout(g, pi, rng);
    REQUIRE(ep.states.size() == 3);
    REQUIRE(ep.actions.size() == 3);
    REQUIRE(ep.rewards.size() == 3);
    CHECK(ep.states[0] == sim::kStart);
    for (int h = 0; h < 3; ++h) {
      CHECK(ep.actions[h] >= 0);
      CHECK(ep.actions[h] < 4);
      for (int i = 0; i < 2; ++i) {
        CHECK(ep.rewards[h][i] == g.reward(i, h, ep.states[h], ep.actions[h]));
      }
    }
    CHECK(ep.final_state >= 0);
    CHECK(ep.final_state < 5);
  }
}

TEST_CASE("policy check rejects rows off the simplex") {
  const LinearMarkovGame g = make_sim_game(0.0);
  JointPolicy pi = JointPolicy::uniform(g);
  CHECK_NOTHROW(pi.check());
  pi.at(1, 2)(0) += 1e-6;
  CHECK_THROWS_AS(pi.check(), ValidationError);
}
