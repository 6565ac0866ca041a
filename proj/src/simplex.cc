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

#include "drmg/simplex.h"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace drmg {
namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kFeasTol = 1e-9;

// Tableau with the objective in the last row and the rhs in the last column.
// The objective row stores reduced costs of the maximization problem in the
// "z_j - c_j" convention: a negative entry can enter the basis.
class Tableau {
 public:
  Tableau(int rows, int cols) : t_(Matrix::Zero(rows + 1, cols + 1)), basis_(rows, -1) {}

  double& at(int r, int c) { return t_(r, c); }
  int rows() const { return static_cast<int>(t_.rows()) - 1; }
  int cols() const { return static_cast<int>(t_.cols()) - 1; }
  double rhs(int r) const { return t_(r, cols()); }
  double objective() const { return t_(rows(), cols()); }
  std::vector<int>& basis() { return basis_; }

  void set_objective(const Vector& cost) {
    t_.row(rows()).setZero();
    for (int j = 0; j < cost.size(); ++j) t_(rows(), j) = -cost(j);
    for (int r = 0; r < rows(); ++r) {
      const int b = basis_[r];
      const double coef = t_(rows(), b);
      if (coef != 0.0) t_.row(rows()) -= coef * t_.row(r);
    }
  }

  void pivot(int r, int c) {
    t_.row(r) /= t_(r, c);
    for (int i = 0; i <= rows(); ++i) {
      if (i == r) continue;
      const double f = t_(i, c);
      if (f != 0.0) t_.row(i) -= f * t_.row(r);
    }
    basis_[r] = c;
  }

  // Runs Bland's rule over columns [0, allowed). Returns the pivot count.
  int optimize(int allowed, int pivot_limit) {
    int pivots = 0;
    while (true) {
      int enter = -1;
      for (int j = 0; j < allowed; ++j) {
        if (t_(rows(), j) < -kPivotTol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return pivots;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int r = 0; r < rows(); ++r) {
        const double a = t_(r, enter);
        if (a <= kPivotTol) continue;
        const double ratio = t_(r, cols()) / a;
        if (ratio < best - 1e-15 ||
            (std::abs(ratio - best) <= 1e-15 && leave >= 0 && basis_[r] < basis_[leave])) {
          best = ratio;
          leave = r;
        }
      }
      if (leave < 0) throw SolverError("linear program is unbounded");
      pivot(leave, enter);
      if (++pivots > pivot_limit) throw SolverError("simplex pivot limit exceeded");
    }
  }

  void drop_row(int r) {
    const int last = rows();
    Matrix next(t_.rows() - 1, t_.cols());
    int k = 0;
    for (int i = 0; i <= last; ++i) {
      if (i != r) next.row(k++) = t_.row(i);
    }
    t_ = std::move(next);
    basis_.erase(basis_.begin() + r);
  }

 private:
  Matrix t_;
  std::vector<int> basis_;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp) {
  const int n = static_cast<int>(lp.objective.size());
  const int m_le = static_cast<int>(lp.le_matrix.rows());
  const int m_eq = static_cast<int>(lp.eq_matrix.rows());
  if ((m_le > 0 && lp.le_matrix.cols() != n) || (m_eq > 0 && lp.eq_matrix.cols() != n) ||
      lp.le_rhs.size() != m_le || lp.eq_rhs.size() != m_eq) {
    throw std::invalid_argument("linear program dimensions are inconsistent");
  }
  if ((m_le > 0 && lp.le_rhs.minCoeff() < 0.0) || (m_eq > 0 && lp.eq_rhs.minCoeff() < 0.0)) {
    throw std::invalid_argument("right-hand sides must be nonnegative");
  }

  // Columns: originals, slacks, artificials.
  const int slack0 = n;
  const int art0 = n + m_le;
  const int total = n + m_le + m_eq;
  Tableau tab(m_le + m_eq, total);
  for (int r = 0; r < m_le; ++r) {
    for (int j = 0; j < n; ++j) tab.at(r, j) = lp.le_matrix(r, j);
    tab.at(r, slack0 + r) = 1.0;
    tab.at(r, total) = lp.le_rhs(r);
    tab.basis()[r] = slack0 + r;
  }
  for (int r = 0; r < m_eq; ++r) {
    const int row = m_le + r;
    for (int j = 0; j < n; ++j) tab.at(row, j) = lp.eq_matrix(r, j);
    tab.at(row, art0 + r) = 1.0;
    tab.at(row, total) = lp.eq_rhs(r);
    tab.basis()[row] = art0 + r;
  }
  const int limit = 50 * (total + m_le + m_eq) + 1000;

  LpSolution out;
  if (m_eq > 0) {
    Vector phase1 = Vector::Zero(total);
    phase1.tail(m_eq).setConstant(-1.0);
    tab.set_objective(phase1);
    out.pivots += tab.optimize(total, limit);
    if (-tab.objective() > kFeasTol) {
      std::ostringstream msg;
      msg << "linear program is infeasible (phase-one residual " << -tab.objective() << ")";
      throw SolverError(msg.str());
    }
    // Pivot remaining zero-level artificials out of the basis.
    for (int r = tab.rows() - 1; r >= 0; --r) {
      if (tab.basis()[r] < art0) continue;
      int col = -1;
      for (int j = 0; j < art0; ++j) {
        if (std::abs(tab.at(r, j)) > kPivotTol) {
          col = j;
          break;
        }
      }
      if (col >= 0) {
        tab.pivot(r, col);
        ++out.pivots;
      } else {
        tab.drop_row(r);
      }
    }
  }

  Vector cost = Vector::Zero(total);
  cost.head(n) = lp.objective;
  tab.set_objective(cost);
  out.pivots += tab.optimize(art0, limit);

  out.x = Vector::Zero(n);
  for (int r = 0; r < tab.rows(); ++r) {
    const int b = tab.basis()[r];
    if (b < n) out.x(b) = tab.rhs(r);
  }
  out.objective = lp.objective.dot(out.x);
  return out;
}

}  // namespace drmg
