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

// Coarse correlated equilibria of one-shot n-player games.

#ifndef DRMG_CCE_H_
#define DRMG_CCE_H_

#include <vector>

#include "drmg/game.h"
#include "drmg/simplex.h"

namespace drmg {

inline constexpr double kCceGapTolerance = 1e-9;

// One payoff vector per player over the joint action space, plus the value
// cap B used by the cover grid.
struct PayoffTensor {
  JointActionSpace space;
  std::vector<Vector> payoffs;
  double cap = 0.0;

  int num_players() const { return space.num_players(); }
  void check() const;
};

// A distribution over joint actions.
using CorrelatedDistribution = Vector;

// max over players i and deviations a_i' of
//   E_{a~pi}[Q_i(a_i', a_-i)] - E_{a~pi}[Q_i(a)].
// pi is an exact CCE iff the gap is <= 0.
double cce_gap(const PayoffTensor& payoffs, const CorrelatedDistribution& pi);

// Welfare-maximising CCE from the deviation-constrained LP. Deterministic.
// Throws SolverError if the LP fails or the solution misses the gap
// tolerance; the message names the violated deviation constraint.
CorrelatedDistribution solve_cce(const PayoffTensor& payoffs);

// Snaps every entry to the nearest point of {0, 2eps, 4eps, ...}, then clamps
// to [0, cap]. For inputs in [0, cap] the sup-norm error is at most eps.
PayoffTensor round_to_cover(const PayoffTensor& payoffs, double eps);

// solve_cce(round_to_cover(payoffs, eps)). A 2eps-approximate CCE of the
// unrounded game, and identical for any two inputs with the same rounding.
CorrelatedDistribution find_cce(const PayoffTensor& payoffs, double eps);

}  // namespace drmg

#endif  // DRMG_CCE_H_
