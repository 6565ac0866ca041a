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

#include "drmg/cce.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace drmg {
namespace {

// Row of the deviation constraint for (player, deviation): coefficient of
// pi(a) is Q_i(dev, a_-i) - Q_i(a).
Vector deviation_row(const PayoffTensor& p, int player, int deviation) {
  const int N = p.space.size();
  Vector row(N);
  const Vector& q = p.payoffs[player];
  for (int a = 0; a < N; ++a) {
    row(a) = q(p.space.with_component(a, player, deviation)) - q(a);
  }
  return row;
}

}  // namespace

void PayoffTensor::check() const {
  if (static_cast<int>(payoffs.size()) != space.num_players()) {
    throw std::invalid_argument("one payoff array per player required");
  }
  for (const Vector& q : payoffs) {
    if (q.size() != space.size()) throw std::invalid_argument("payoff array has wrong shape");
    if (!q.allFinite()) throw std::invalid_argument("payoff entries must be finite");
  }
}

double cce_gap(const PayoffTensor& payoffs, const CorrelatedDistribution& pi) {
  payoffs.check();
  if (pi.size() != payoffs.space.size()) {
    throw std::invalid_argument("distribution does not match the joint action space");
  }
  double gap = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < payoffs.num_players(); ++i) {
    for (int dev = 0; dev < payoffs.space.num_actions(i); ++dev) {
      gap = std::max(gap, deviation_row(payoffs, i, dev).dot(pi));
    }
  }
  return gap;
}

CorrelatedDistribution solve_cce(const PayoffTensor& payoffs) {
  payoffs.check();
  const int N = payoffs.space.size();
  int deviations = 0;
  for (int i = 0; i < payoffs.num_players(); ++i) deviations += payoffs.space.num_actions(i);

  LinearProgram lp;
  lp.objective = Vector::Zero(N);
  for (const Vector& q : payoffs.payoffs) lp.objective += q;
  lp.le_matrix.resize(deviations, N);
  lp.le_rhs = Vector::Zero(deviations);
  int row = 0;
  for (int i = 0; i < payoffs.num_players(); ++i) {
    for (int dev = 0; dev < payoffs.space.num_actions(i); ++dev) {
      lp.le_matrix.row(row++) = deviation_row(payoffs, i, dev).transpose();
    }
  }
  lp.eq_matrix = Matrix::Ones(1, N);
  lp.eq_rhs = Vector::Ones(1);

  Vector pi = solve_lp(lp).x;
  pi = pi.cwiseMax(0.0);
  pi /= pi.sum();

  row = 0;
  for (int i = 0; i < payoffs.num_players(); ++i) {
    for (int dev = 0; dev < payoffs.space.num_actions(i); ++dev, ++row) {
      const double violation = lp.le_matrix.row(row).dot(pi);
      if (violation > kCceGapTolerance) {
        std::ostringstream msg;
        msg << "CCE solve failed: deviation of player " << i << " to action " << dev
            << " gains " << violation;
        throw SolverError(msg.str());
      }
    }
  }
  return pi;
}

PayoffTensor round_to_cover(const PayoffTensor& payoffs, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("cover width must be positive");
  payoffs.check();
  PayoffTensor out = payoffs;
  const double spacing = 2.0 * eps;
  for (Vector& q : out.payoffs) {
    for (int a = 0; a < q.size(); ++a) {
      const double snapped = std::floor(q(a) / spacing + 0.5) * spacing;
      q(a) = std::clamp(snapped, 0.0, payoffs.cap);
    }
  }
  return out;
}

CorrelatedDistribution find_cce(const PayoffTensor& payoffs, double eps) {
  return solve_cce(round_to_cover(payoffs, eps));
}

}  // namespace drmg
