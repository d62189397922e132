#include "linear_program.hpp"

#include <cmath>
#include <limits>

namespace ehz {

LinearProgram::LinearProgram(int num_vars)
    : objective(Vec::Zero(num_vars)),
      a_eq(0, num_vars),
      b_eq(0),
      a_le(0, num_vars),
      b_le(0),
      free_var(static_cast<std::size_t>(num_vars), false) {}

void LinearProgram::add_eq(const Vec& row, double rhs) {
  const Eigen::Index r = a_eq.rows();
  a_eq.conservativeResize(r + 1, num_vars());
  a_eq.row(r) = row.transpose();
  b_eq.conservativeResize(r + 1);
  b_eq(r) = rhs;
}

void LinearProgram::add_le(const Vec& row, double rhs) {
  const Eigen::Index r = a_le.rows();
  a_le.conservativeResize(r + 1, num_vars());
  a_le.row(r) = row.transpose();
  b_le.conservativeResize(r + 1);
  b_le(r) = rhs;
}

namespace {

using Tableau = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr double kPivotTol = 1e-11;

// Dense tableau simplex. Row 0..m-1 are constraints, row m is the objective
// (reduced costs); the last column is the right-hand side.
class Simplex {
 public:
  Simplex(Tableau t, std::vector<int> basis) : t_(std::move(t)), basis_(std::move(basis)) {
    m_ = static_cast<int>(t_.rows()) - 1;
    cols_ = static_cast<int>(t_.cols()) - 1;
  }

  // Optimizes the objective row over columns [0, active_cols).
  LpStatus run(int active_cols) {
    const int max_iter = 50 * (m_ + cols_) + 1000;
    int degenerate_streak = 0;
    for (int iter = 0; iter < max_iter; ++iter) {
      const bool bland = degenerate_streak > 50;
      int enter = -1;
      double best = -kPivotTol;
      for (int j = 0; j < active_cols; ++j) {
        const double rc = t_(m_, j);
        if (rc < best) {
          enter = j;
          if (bland) break;
          best = rc;
        }
      }
      if (enter < 0) return LpStatus::Optimal;

      int leave = -1;
      double ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m_; ++i) {
        const double a = t_(i, enter);
        if (a > kPivotTol) {
          const double r = t_(i, cols_) / a;
          if (r < ratio - 1e-13 ||
              (std::abs(r - ratio) <= 1e-13 && leave >= 0 && basis_[i] < basis_[leave])) {
            ratio = r;
            leave = i;
          }
        }
      }
      if (leave < 0) return LpStatus::Unbounded;
      degenerate_streak = (ratio < 1e-13) ? degenerate_streak + 1 : 0;
      pivot(leave, enter);
    }
    return LpStatus::IterationLimit;
  }

  void pivot(int r, int c) {
    t_.row(r) /= t_(r, c);
    for (int i = 0; i <= m_; ++i) {
      if (i == r) continue;
      const double f = t_(i, c);
      if (f != 0.0) t_.row(i) -= f * t_.row(r);
    }
    basis_[r] = c;
  }

  Tableau& tableau() { return t_; }
  std::vector<int>& basis() { return basis_; }
  int rows() const { return m_; }
  int cols() const { return cols_; }

 private:
  Tableau t_;
  std::vector<int> basis_;
  int m_ = 0;
  int cols_ = 0;
};

}  // namespace

LpResult solve_lp(const LinearProgram& lp) {
  const int nv = lp.num_vars();
  // Column layout: structural (free vars split), slacks, artificials.
  std::vector<int> pos_col(nv), neg_col(nv, -1);
  int ncol = 0;
  for (int j = 0; j < nv; ++j) {
    pos_col[j] = ncol++;
    if (lp.free_var[j]) neg_col[j] = ncol++;
  }
  const int n_struct = ncol;
  const int m_eq = static_cast<int>(lp.a_eq.rows());
  const int m_le = static_cast<int>(lp.a_le.rows());
  const int m = m_eq + m_le;
  const int n_slack = m_le;

  // Rows that need an artificial variable.
  std::vector<int> art_row;
  std::vector<double> sign(m, 1.0);
  for (int i = 0; i < m_eq; ++i) {
    if (lp.b_eq(i) < 0) sign[i] = -1.0;
    art_row.push_back(i);
  }
  for (int i = 0; i < m_le; ++i) {
    if (lp.b_le(i) < 0) {
      sign[m_eq + i] = -1.0;
      art_row.push_back(m_eq + i);
    }
  }
  const int n_art = static_cast<int>(art_row.size());
  const int total = n_struct + n_slack + n_art;

  Tableau t = Tableau::Zero(m + 1, total + 1);
  std::vector<int> basis(m, -1);
  auto fill_row = [&](int row, const auto& coeffs, double rhs) {
    for (int j = 0; j < nv; ++j) {
      const double a = coeffs(j) * sign[row];
      t(row, pos_col[j]) = a;
      if (neg_col[j] >= 0) t(row, neg_col[j]) = -a;
    }
    t(row, total) = rhs * sign[row];
  };
  for (int i = 0; i < m_eq; ++i) fill_row(i, lp.a_eq.row(i), lp.b_eq(i));
  for (int i = 0; i < m_le; ++i) {
    fill_row(m_eq + i, lp.a_le.row(i), lp.b_le(i));
    t(m_eq + i, n_struct + i) = sign[m_eq + i];
    if (sign[m_eq + i] > 0) basis[m_eq + i] = n_struct + i;
  }
  for (int a = 0; a < n_art; ++a) {
    t(art_row[a], n_struct + n_slack + a) = 1.0;
    basis[art_row[a]] = n_struct + n_slack + a;
  }

  LpResult result;
  // Phase 1: minimize the sum of artificials.
  if (n_art > 0) {
    for (int a = 0; a < n_art; ++a) t.row(m) -= t.row(art_row[a]);
    for (int a = 0; a < n_art; ++a) t(m, n_struct + n_slack + a) = 0.0;
    Simplex phase1(std::move(t), std::move(basis));
    const LpStatus st = phase1.run(total);
    Tableau& tt = phase1.tableau();
    double scale = 1.0;
    for (int i = 0; i < m; ++i) scale = std::max(scale, std::abs(tt(i, total)));
    if (st == LpStatus::IterationLimit) {
      result.status = st;
      return result;
    }
    if (-tt(m, total) > 1e-9 * scale) {
      result.status = LpStatus::Infeasible;
      return result;
    }
    // Drive remaining artificials out of the basis.
    auto& bas = phase1.basis();
    for (int i = 0; i < m; ++i) {
      if (bas[i] < n_struct + n_slack) continue;
      int c = -1;
      double best = 1e-9;
      for (int j = 0; j < n_struct + n_slack; ++j)
        if (std::abs(tt(i, j)) > best) {
          best = std::abs(tt(i, j));
          c = j;
        }
      if (c >= 0) phase1.pivot(i, c);
      // Otherwise the row is redundant; the artificial stays at zero.
    }
    t = std::move(tt);
    basis = std::move(bas);
    // Artificials are frozen at zero by excluding their columns below.
    for (int a = 0; a < n_art; ++a) t.col(n_struct + n_slack + a).setZero();
    for (int i = 0; i < m; ++i)
      if (basis[i] >= n_struct + n_slack) t(i, basis[i]) = 1.0;
  }

  // Phase 2 objective row.
  t.row(m).setZero();
  for (int j = 0; j < nv; ++j) {
    t(m, pos_col[j]) = lp.objective(j);
    if (neg_col[j] >= 0) t(m, neg_col[j]) = -lp.objective(j);
  }
  for (int i = 0; i < m; ++i) {
    const double f = t(m, basis[i]);
    if (f != 0.0) t.row(m) -= f * t.row(i);
  }
  Simplex phase2(std::move(t), std::move(basis));
  const LpStatus st = phase2.run(n_struct + n_slack);
  result.status = st;
  if (st != LpStatus::Optimal) return result;

  const Tableau& tt = phase2.tableau();
  Vec col_value = Vec::Zero(total);
  for (int i = 0; i < m; ++i) col_value(phase2.basis()[i]) = tt(i, total);
  result.x.resize(nv);
  for (int j = 0; j < nv; ++j) {
    double v = col_value(pos_col[j]);
    if (neg_col[j] >= 0) v -= col_value(neg_col[j]);
    result.x(j) = v;
  }
  result.value = lp.objective.dot(result.x);
  return result;
}

}  // namespace ehz
