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

#include "drmg/robust_bellman.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace drmg {
namespace {

void check_inputs(const Vector& mu, const Vector& values, double sigma) {
  if (mu.size() != values.size() || mu.size() == 0) {
    throw std::invalid_argument("mu and V must be non-empty and the same length");
  }
  if (mu.minCoeff() < 0.0 || std::abs(mu.sum() - 1.0) > kKernelTolerance) {
    throw std::invalid_argument("mu is not a distribution");
  }
  if (!values.allFinite()) throw std::invalid_argument("V must be finite");
  if (!(sigma >= 0.0 && sigma <= 1.0)) throw std::invalid_argument("sigma must lie in [0,1]");
}

int lowest_argmin(const Vector& values) {
  int best = 0;
  for (int s = 1; s < values.size(); ++s) {
    if (values(s) < values(best)) best = s;
  }
  return best;
}

}  // namespace

Vector clip(const Vector& values, double alpha) {
  if (alpha < 0.0) throw std::invalid_argument("clip level must be nonnegative");
  return values.cwiseMin(alpha);
}

DualSolution dual_worst_case(const Vector& mu, const Vector& values, double sigma,
                             AlphaRange range, double cap) {
  check_inputs(mu, values, sigma);
  const double vmin = values.minCoeff();
  const double vmax = values.maxCoeff();
  double lo = vmin;
  double hi = vmax;
  if (range == AlphaRange::kZeroToCap) {
    if (cap < 0.0) throw std::invalid_argument("cap must be nonnegative");
    lo = 0.0;
    hi = cap;
  }

  std::vector<double> alphas{lo, hi};
  for (int s = 0; s < values.size(); ++s) {
    if (values(s) > lo && values(s) < hi) alphas.push_back(values(s));
  }
  std::sort(alphas.begin(), alphas.end());
  alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());

  DualSolution out;
  out.value = -std::numeric_limits<double>::infinity();
  out.trace.reserve(alphas.size());
  for (double alpha : alphas) {
    const double objective = mu.dot(values.cwiseMin(alpha)) -
                             sigma * (alpha - std::min(alpha, vmin));
    out.trace.emplace_back(alpha, objective);
    if (objective > out.value) {
      out.value = objective;
      out.alpha = alpha;
    }
  }
  return out;
}

PrimalSolution primal_worst_case(const Vector& mu, const Vector& values, double sigma) {
  check_inputs(mu, values, sigma);
  const int n = static_cast<int>(values.size());
  const int target = lowest_argmin(values);

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return values(x) > values(y); });

  PrimalSolution out;
  out.distribution = mu;
  double budget = sigma;
  for (int s : order) {
    if (budget <= 0.0) break;
    if (values(s) <= values(target)) break;
    const double moved = std::min(budget, out.distribution(s));
    out.distribution(s) -= moved;
    out.distribution(target) += moved;
    budget -= moved;
  }
  out.value = out.distribution.dot(values);
  return out;
}

Vector robust_factor_values(const LinearMarkovGame& game, int h, const Vector& values,
                            double sigma) {
  if (h < 0 || h >= game.horizon()) throw std::out_of_range("step index out of range");
  if (values.size() != game.num_states()) {
    throw std::invalid_argument("value vector must cover every state");
  }
  const Matrix& mu = game.factors(h);
  Vector out(game.dimension());
  for (int j = 0; j < game.dimension(); ++j) {
    out(j) = dual_worst_case(mu.row(j).transpose(), values, sigma).value;
  }
  return out;
}

double robust_factor_expectation(const LinearMarkovGame& game, int h, int s, int a,
                                 const Vector& values, double sigma) {
  game.check_indices(h, s, a);
  return game.feature(s, a).dot(robust_factor_values(game, h, values, sigma));
}

double ratio_ball_infimum(const Vector& mu, const Vector& values, double bound) {
  if (!(bound >= 1.0)) throw std::invalid_argument("ratio bound must be at least 1");
  const int n = static_cast<int>(values.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return values(x) < values(y); });
  double remaining = 1.0;
  double total = 0.0;
  for (int s : order) {
    if (remaining <= 0.0) break;
    if (mu(s) <= 0.0) continue;
    const double room = std::isinf(bound) ? remaining : std::min(remaining, bound * mu(s));
    total += room * values(s);
    remaining -= room;
  }
  return total;
}

TiltCheck tilted_kernel_check(const Vector& mu, const Vector& values, double sigma) {
  check_inputs(mu, values, sigma);
  if (values.minCoeff() != 0.0) {
    throw std::domain_error("tilted kernel check requires min(V) == 0");
  }
  const PrimalSolution primal = primal_worst_case(mu, values, sigma);
  const int target = lowest_argmin(values);
  const double tol = 1e-9;

  TiltCheck out;
  out.value = primal.value;
  out.factor = 1.0 - sigma;

  // Mass taken from each state by the greedy transport.
  Vector removed = (mu - primal.distribution).cwiseMax(0.0);
  const double moved = removed.sum();
  if (moved >= 1.0) {
    out.tilted = Vector::Zero(mu.size());
    out.tilted(target) = 1.0;
  } else {
    // moved < sigma only when every positive-valued state was emptied; what
    // remains sits on zero-valued states.
    out.tilted = (mu - removed) / (1.0 - moved);
  }

  out.max_ratio = 0.0;
  for (int s = 0; s < mu.size(); ++s) {
    if (mu(s) > 0.0) {
      out.max_ratio = std::max(out.max_ratio, out.tilted(s) / mu(s));
    } else if (out.tilted(s) > 0.0) {
      out.max_ratio = std::numeric_limits<double>::infinity();
    }
  }
  const double inv_one_minus = sigma >= 1.0 ? std::numeric_limits<double>::infinity()
                                            : 1.0 / (1.0 - sigma);
  const double inv_sigma = sigma <= 0.0 ? std::numeric_limits<double>::infinity()
                                        : 1.0 / sigma;
  out.ratio_bound_ok = out.max_ratio <= inv_one_minus * (1.0 + 1e-12);
  out.ratio_within_inverse_sigma = out.max_ratio <= inv_sigma * (1.0 + 1e-12);
  out.identity_ok = std::abs(out.value - out.factor * out.tilted.dot(values)) <= tol;

  out.one_minus_sigma_form_value =
      sigma >= 1.0 ? 0.0 : (1.0 - sigma) * ratio_ball_infimum(mu, values, inv_one_minus);
  out.one_minus_sigma_form_ok = std::abs(out.one_minus_sigma_form_value - out.value) <= tol;
  out.inverse_sigma_form_value =
      sigma <= 0.0 ? 0.0 : sigma * ratio_ball_infimum(mu, values, inv_sigma);
  out.inverse_sigma_form_ok = std::abs(out.inverse_sigma_form_value - out.value) <= tol;
  return out;
}

}  // namespace drmg
