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
#include "drmg/robust_bellman.h"
#include "oracles.h"

using namespace drmg;
using drmg::testing::grid_tv_infimum;
using drmg::testing::lp_tv_infimum;
using drmg::testing::random_distribution;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<int>(xs.size()));
  int k = 0;
  for (double x : xs) v(k++) = x;
  return v;
}

Vector random_values(int n, std::mt19937_64& rng, double scale, bool zero_min) {
  std::uniform_real_distribution<double> u(0.0, scale);
  Vector v(n);
  for (int k = 0; k < n; ++k) v(k) = u(rng);
  // Repeated values exercise tie handling.
  if (n > 2) v(n - 1) = v(0);
  if (zero_min) v(static_cast<int>(rng() % n)) = 0.0;
  return v;
}

}  // namespace

TEST_CASE("clip") {
  CHECK(clip(vec({0, 1, 2}), 1.0) == vec({0, 1, 1}));
  CHECK(clip(vec({0.5, 3}), 3.0) == vec({0.5, 3}));
  CHECK(clip(vec({0.5, 3}), 0.0) == vec({0, 0}));
  CHECK_THROWS_AS(clip(vec({1}), -0.1), std::invalid_argument);
}

TEST_CASE("two-state worst case: value 0.3 at alpha 1, mass (0.7, 0.3)") {
  const Vector mu = vec({0.5, 0.5});
  const Vector v = vec({0.0, 1.0});
  const DualSolution d = dual_worst_case(mu, v, 0.2);
  CHECK(d.value == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(d.alpha == 1.0);
  const PrimalSolution p = primal_worst_case(mu, v, 0.2);
  CHECK(p.value == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(p.distribution(0) == doctest::Approx(0.7));
  CHECK(p.distribution(1) == doctest::Approx(0.3));
  CHECK(grid_tv_infimum(mu, v, 0.2, 1000) == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("zero radius gives the plain mean") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 50; ++t) {
    const Vector mu = random_distribution(6, rng, 0.3);
    const Vector v = random_values(6, rng, 3.0, false);
    const DualSolution d = dual_worst_case(mu, v, 0.0);
    CHECK(d.value == doctest::Approx(mu.dot(v)).epsilon(1e-13));
    // Smallest maximiser: the largest value the distribution can reach.
    double top = v.minCoeff();
    for (int s = 0; s < 6; ++s) {
      if (mu(s) > 0.0) top = std::max(top, v(s));
    }
    CHECK(d.alpha == top);
    const PrimalSolution p = primal_worst_case(mu, v, 0.0);
    CHECK(p.value == doctest::Approx(mu.dot(v)).epsilon(1e-13));
    CHECK(p.distribution == mu);
  }
}

TEST_CASE("indicator backup out of the bad state gives p - sigma") {
  const Vector mu = vec({0.0, 0.0, 0.8, 0.2});
  const Vector v = vec({0.0, 0.0, 1.0, 0.0});
  CHECK(dual_worst_case(mu, v, 0.1).value == doctest::Approx(0.7).epsilon(1e-14));
}

TEST_CASE("full radius with a zero-valued state") {
  const Vector mu = vec({0.2, 0.3, 0.5});
  const Vector v = vec({2.0, 0.0, 1.0});
  CHECK(primal_worst_case(mu, v, 1.0).value == 0.0);
  CHECK(dual_worst_case(mu, v, 1.0).value == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("dual and primal agree with the LP oracle on random instances") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 400; ++t) {
    const int n = 1 + static_cast<int>(rng() % 10);
    const double sigma = 0.1 * static_cast<double>(rng() % 11);
    const Vector mu = random_distribution(n, rng, 0.3);
    const Vector v = random_values(n, rng, 3.0, t % 2 == 0);
    const double lp = lp_tv_infimum(mu, v, sigma);
    const double dual = dual_worst_case(mu, v, sigma).value;
    const PrimalSolution primal = primal_worst_case(mu, v, sigma);
    CHECK(std::abs(dual - lp) <= 1e-9);
    CHECK(std::abs(primal.value - lp) <= 1e-9);
    CHECK(primal.value >= v.minCoeff() - 1e-12);
    CHECK(primal.value <= mu.dot(v) + 1e-12);
    // The returned minimiser is feasible and attains the value.
    CHECK(primal.distribution.minCoeff() >= 0.0);
    CHECK(std::abs(primal.distribution.sum() - 1.0) <= 1e-12);
    CHECK(0.5 * (primal.distribution - mu).cwiseAbs().sum() <= sigma + 1e-12);
    CHECK(std::abs(primal.distribution.dot(v) - primal.value) <= 1e-12);
  }
}

TEST_CASE("dual matches a dense grid on three-state instances") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 30; ++t) {
    const Vector mu = random_distribution(3, rng, 0.0);
    const Vector v = random_values(3, rng, 1.0, false);
    const double sigma = 0.05 + 0.9 * uniform_unit(rng);
    const double grid = grid_tv_infimum(mu, v, sigma, 400);
    const double dual = dual_worst_case(mu, v, sigma).value;
    // The grid only sees points of the ball, so it sits above the infimum.
    CHECK(dual <= grid + 1e-12);
    CHECK(grid - dual <= 0.01);
  }
}

TEST_CASE("breakpoint trace is ascending and attains the reported value") {
  const Vector mu = vec({0.1, 0.4, 0.3, 0.2});
  const Vector v = vec({0.0, 2.0, 1.0, 2.0});
  const DualSolution d = dual_worst_case(mu, v, 0.25);
  REQUIRE(d.trace.size() == 3);
  for (std::size_t k = 1; k < d.trace.size(); ++k) CHECK(d.trace[k - 1].first < d.trace[k].first);
  double best = -1e300;
  double arg = 0.0;
  for (const auto& [a, obj] : d.trace) {
    if (obj > best) {
      best = obj;
      arg = a;
    }
  }
  CHECK(d.value == best);
  CHECK(d.alpha == arg);
  CHECK(d.alpha >= v.minCoeff());
  CHECK(d.alpha <= v.maxCoeff());
}

TEST_CASE("ties in the dual resolve to the smallest alpha") {
  // Objective is flat on [1, 2] when sigma equals the mass above 1.
  const Vector mu = vec({0.5, 0.5});
  const Vector v = vec({1.0, 2.0});
  const DualSolution d = dual_worst_case(mu, v, 0.5, AlphaRange::kZeroToCap, 2.0);
  CHECK(d.alpha == 1.0);
}

TEST_CASE("dual with a positive minimum uses the corrected objective") {
  // The uncorrected max_alpha E[min(V,alpha)] - sigma alpha would give 1.1.
  const Vector mu = vec({0.5, 0.5});
  const Vector v = vec({1.0, 2.0});
  CHECK(dual_worst_case(mu, v, 0.2).value == doctest::Approx(1.3).epsilon(1e-15));
  CHECK(lp_tv_infimum(mu, v, 0.2) == doctest::Approx(1.3).epsilon(1e-12));
}

TEST_CASE("zero-to-cap interval agrees with the value range when min V is zero") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 100; ++t) {
    const Vector mu = random_distribution(5, rng, 0.2);
    const Vector v = random_values(5, rng, 3.0, true);
    const double sigma = uniform_unit(rng);
    const double a = dual_worst_case(mu, v, sigma).value;
    const double b = dual_worst_case(mu, v, sigma, AlphaRange::kZeroToCap, 3.0).value;
    CHECK(std::abs(a - b) <= 1e-12);
  }
}

TEST_CASE("dual objective is concave in alpha") {
  std::mt19937_64 rng(37);
  for (int t = 0; t < 200; ++t) {
    const Vector mu = random_distribution(6, rng, 0.2);
    const Vector v = random_values(6, rng, 2.0, true);
    const double sigma = uniform_unit(rng);
    auto objective = [&](double a) { return mu.dot(v.cwiseMin(a)) - sigma * a; };
    const double a1 = 2.0 * uniform_unit(rng);
    const double a2 = 2.0 * uniform_unit(rng);
    CHECK(objective(0.5 * (a1 + a2)) >= 0.5 * (objective(a1) + objective(a2)) - 1e-12);
  }
}

TEST_CASE("worst case is monotone in V and antitone in sigma") {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 200; ++t) {
    const Vector mu = random_distribution(7, rng, 0.2);
    const Vector v = random_values(7, rng, 2.0, t % 3 == 0);
    Vector w = v;
    for (int k = 0; k < w.size(); ++k) w(k) += 0.5 * uniform_unit(rng);
    const double s1 = uniform_unit(rng);
    const double s2 = std::min(1.0, s1 + 0.3 * uniform_unit(rng));
    CHECK(dual_worst_case(mu, v, s1).value <= dual_worst_case(mu, w, s1).value + 1e-12);
    CHECK(dual_worst_case(mu, v, s1).value >= dual_worst_case(mu, v, s2).value - 1e-12);
  }
}

TEST_CASE("min-zero values are shrunk below (1 - sigma) max V") {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 200; ++t) {
    const Vector mu = random_distribution(6, rng, 0.2);
    const Vector v = random_values(6, rng, 3.0, true);
    const double sigma = uniform_unit(rng);
    CHECK(dual_worst_case(mu, v, sigma).value <= (1.0 - sigma) * v.maxCoeff() + 1e-12);
  }
}

TEST_CASE("input checks") {
  CHECK_THROWS_AS(dual_worst_case(vec({0.5, 0.6}), vec({0, 1}), 0.1), std::invalid_argument);
  CHECK_THROWS_AS(primal_worst_case(vec({0.5, 0.5}), vec({0, 1}), 1.5), std::invalid_argument);
  CHECK_THROWS_AS(dual_worst_case(vec({1.0}), vec({0, 1}), 0.1), std::invalid_argument);
}

TEST_CASE("robust factor expectation at zero radius is the plain expectation") {
  const LinearMarkovGame g = make_sim_game(0.3);
  const Vector v = vec({0.3, 2.0, 0.5, 0.0, 1.2});
  for (int h = 0; h < g.horizon(); ++h) {
    for (int s = 0; s < g.num_states(); ++s) {
      for (int a = 0; a < g.num_joint_actions(); ++a) {
        CHECK(robust_factor_expectation(g, h, s, a, v, 0.0) ==
              doctest::Approx(transition_distribution(g, h, s, a).dot(v)).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("robust factor expectation on a tabular game is the row worst case") {
  const HardnessPair pair = make_hardness_pair(0.8, 0.2, 0.1);
  const LinearMarkovGame& g = pair.first;
  Vector v = Vector::Zero(4);
  v(hardness::kGoodOne) = 1.0;
  const auto& sp = g.actions();
  CHECK(robust_factor_expectation(g, 1, hardness::kBad, sp.encode(std::vector<int>{0, 0}), v,
                                  0.1) == doctest::Approx(0.7).epsilon(1e-14));
  CHECK(robust_factor_expectation(g, 1, hardness::kBad, sp.encode(std::vector<int>{1, 1}), v,
                                  0.1) == doctest::Approx(0.1).epsilon(1e-13));
  CHECK(robust_factor_expectation(g, 1, hardness::kBad, sp.encode(std::vector<int>{0, 1}), v,
                                  0.1) == doctest::Approx(0.4).epsilon(1e-14));
}

TEST_CASE("robust factor expectation matches per-factor LP oracle on random games") {
  std::mt19937_64 rng(47);
  for (int t = 0; t < 30; ++t) {
    const LinearMarkovGame g = drmg::testing::random_linear_game(rng, 5, 4, {2}, 1);
    const Vector v = random_values(5, rng, 2.0, t % 2 == 0);
    const double sigma = uniform_unit(rng);
    const Vector ref = drmg::testing::lp_robust_backup(g, 0, v, sigma);
    for (int s = 0; s < 5; ++s) {
      for (int a = 0; a < 2; ++a) {
        CHECK(std::abs(robust_factor_expectation(g, 0, s, a, v, sigma) - ref(s * 2 + a)) <= 1e-9);
      }
    }
  }
}

TEST_CASE("tilted kernel on the two-state example") {
  const TiltCheck c = tilted_kernel_check(vec({0.5, 0.5}), vec({0.0, 1.0}), 0.2);
  CHECK(c.value == doctest::Approx(0.3));
  CHECK(c.factor == doctest::Approx(0.8));
  CHECK(c.tilted(0) == doctest::Approx(0.625));
  CHECK(c.tilted(1) == doctest::Approx(0.375));
  CHECK(c.max_ratio == doctest::Approx(1.25));
  CHECK(c.ratio_bound_ok);
  CHECK(c.identity_ok);
  CHECK(c.one_minus_sigma_form_ok);
  // sigma * inf over the 1/sigma ratio ball is 0 here, not 0.3.
  CHECK(c.inverse_sigma_form_value == doctest::Approx(0.0));
  CHECK_FALSE(c.inverse_sigma_form_ok);
}

TEST_CASE("tilted kernel at zero radius is the nominal measure") {
  const Vector mu = vec({0.2, 0.3, 0.5});
  const TiltCheck c = tilted_kernel_check(mu, vec({0.0, 1.0, 4.0}), 0.0);
  CHECK(c.factor == 1.0);
  CHECK((c.tilted - mu).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK(c.identity_ok);
  CHECK(c.ratio_bound_ok);
}

TEST_CASE("tilted kernel with two zero-valued states") {
  const Vector mu = vec({0.25, 0.25, 0.5});
  const Vector v = vec({0.0, 0.0, 1.0});
  for (double sigma : {0.1, 0.3, 0.5, 0.7}) {
    const TiltCheck c = tilted_kernel_check(mu, v, sigma);
    CHECK(c.value == doctest::Approx(grid_tv_infimum(mu, v, sigma, 600)).epsilon(1e-9));
    CHECK(c.ratio_bound_ok);
    CHECK(c.identity_ok);
  }
}

TEST_CASE("tilted kernel requires a zero minimum") {
  CHECK_THROWS_AS(tilted_kernel_check(vec({0.5, 0.5}), vec({0.1, 1.0}), 0.2), std::domain_error);
}

TEST_CASE("ratio-ball infimum fills the lowest values first") {
  const Vector mu = vec({0.5, 0.5});
  const Vector v = vec({0.0, 1.0});
  CHECK(ratio_ball_infimum(mu, v, 1.0) == doctest::Approx(0.5));
  CHECK(ratio_ball_infimum(mu, v, 1.25) == doctest::Approx(0.375));
  CHECK(ratio_ball_infimum(mu, v, 2.0) == doctest::Approx(0.0));
  CHECK_THROWS_AS(ratio_ball_infimum(mu, v, 0.5), std::invalid_argument);
}
