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

// Worst-case expectations over total-variation balls.
//
// For a nominal distribution mu over states, a value vector V and a radius
// sigma (half-L1), the inner problem is
//
//   inf { E_nu[V] : nu a distribution, TV(nu, mu) <= sigma }.
//
// Two independent routes are provided: the piecewise-linear dual over a clip
// level alpha, solved exactly on its breakpoints, and a greedy mass-transport
// primal. They must agree to 1e-9.

#ifndef DRMG_ROBUST_BELLMAN_H_
#define DRMG_ROBUST_BELLMAN_H_

#include <utility>
#include <vector>

#include "drmg/game.h"

namespace drmg {

// Elementwise min(V, alpha). Throws on alpha < 0.
Vector clip(const Vector& values, double alpha);

enum class AlphaRange {
  kValueRange,  // [min V, max V]
  kZeroToCap,   // [0, cap]
};

struct DualSolution {
  double value = 0.0;
  double alpha = 0.0;
  // (alpha, objective) at every breakpoint, ascending in alpha.
  std::vector<std::pair<double, double>> trace;
};

// max_alpha { E_mu[min(V, alpha)] - sigma * (alpha - min(alpha, min V)) }.
// The last term is sigma * alpha whenever min V = 0 (the fail-state regime);
// keeping the general form makes the dual exact for any V. Ties resolve to
// the smallest alpha.
DualSolution dual_worst_case(const Vector& mu, const Vector& values, double sigma,
                             AlphaRange range = AlphaRange::kValueRange,
                             double cap = 0.0);

struct PrimalSolution {
  double value = 0.0;
  Vector distribution;
};

// Greedy transport: moves up to sigma mass from the highest-valued states onto
// the lowest-index argmin state.
PrimalSolution primal_worst_case(const Vector& mu, const Vector& values, double sigma);

// Per-factor worst-case values [inf_{TV <= sigma} E_{mu0_{h,j}}[V]]_j.
Vector robust_factor_values(const LinearMarkovGame& game, int h, const Vector& values,
                            double sigma);

// <phi(s,a), robust_factor_values(game, h, V, sigma)>.
double robust_factor_expectation(const LinearMarkovGame& game, int h, int s, int a,
                                 const Vector& values, double sigma);

// Audit of the "tilted kernel" reformulation for min-zero value functions.
// With r the mass moved by the greedy primal, the leftover nominal mass
// (mu - removed) renormalised to a distribution P~ satisfies
// value = (1 - sigma) E_{P~}[V] and sup P~/mu <= 1/(1 - sigma). The
// alternative constant pair (sigma, 1/sigma) is evaluated alongside so that
// callers can see which one is consistent.
struct TiltCheck {
  double value = 0.0;                 // primal worst-case value
  double factor = 0.0;                // 1 - sigma
  Vector tilted;                      // P~
  double max_ratio = 0.0;             // sup_s P~(s) / mu(s) over supp(mu)
  bool ratio_bound_ok = false;        // max_ratio <= 1/(1 - sigma)
  bool identity_ok = false;           // value == factor * E_{P~}[V]
  bool ratio_within_inverse_sigma = false;   // max_ratio <= 1/sigma
  // sigma * inf { E_nu[V] : nu/mu <= 1/sigma } and whether it equals value.
  double inverse_sigma_form_value = 0.0;
  bool inverse_sigma_form_ok = false;
  // (1 - sigma) * inf { E_nu[V] : nu/mu <= 1/(1 - sigma) }.
  double one_minus_sigma_form_value = 0.0;
  bool one_minus_sigma_form_ok = false;
};

// inf { E_nu[V] : nu a distribution, nu(s) <= bound * mu(s) }, filling the
// lowest values first. Requires bound >= 1.
double ratio_ball_infimum(const Vector& mu, const Vector& values, double bound);

// Precondition min(V) == 0; otherwise throws std::domain_error.
TiltCheck tilted_kernel_check(const Vector& mu, const Vector& values, double sigma);

}  // namespace drmg

#endif  // DRMG_ROBUST_BELLMAN_H_
