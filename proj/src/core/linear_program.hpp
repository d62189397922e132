#pragma once

// Small dense linear programs (a few hundred rows at most): Chebyshev centers,
// support values, cone membership, and the lift bounds of the capacity search.

#include "types.hpp"

#include <vector>

namespace ehz {

// minimize objective^T x  subject to  a_eq x = b_eq,  a_le x <= b_le,
// x_j >= 0 unless free_var[j].
struct LinearProgram {
  Vec objective;
  Mat a_eq;
  Vec b_eq;
  Mat a_le;
  Vec b_le;
  std::vector<bool> free_var;

  explicit LinearProgram(int num_vars);
  int num_vars() const { return static_cast<int>(objective.size()); }

  void add_eq(const Vec& row, double rhs);
  void add_le(const Vec& row, double rhs);
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Vec x;
  double value = 0.0;
  bool optimal() const { return status == LpStatus::Optimal; }
};

LpResult solve_lp(const LinearProgram& lp);

}  // namespace ehz
