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

#ifndef DRMG_SIMPLEX_H_
#define DRMG_SIMPLEX_H_

#include <stdexcept>
#include <string>

#include "drmg/game.h"

namespace drmg {

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Standard-form LP
//
//   maximize  c^T x
//   s.t.      A_le x <= b_le,  A_eq x == b_eq,  x >= 0
//
// with b_le >= 0 and b_eq >= 0.
struct LinearProgram {
  Vector objective;
  Matrix le_matrix;
  Vector le_rhs;
  Matrix eq_matrix;
  Vector eq_rhs;
};

struct LpSolution {
  Vector x;
  double objective = 0.0;
  int pivots = 0;
};

// Dense two-phase tableau simplex with Bland's smallest-index rule, so the
// pivot sequence (and therefore the returned vertex) is a pure function of
// the input. Sized for the small games here; no sparsity, no scaling.
// Throws SolverError on infeasibility, unboundedness or a pivot limit.
LpSolution solve_lp(const LinearProgram& lp);

}  // namespace drmg

#endif  // DRMG_SIMPLEX_H_
