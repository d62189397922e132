#pragma once

// Linear symplectic algebra on R^{2n} with coordinates (q_1..q_n, p_1..p_n).
// omega(x, y) = sum_i x_{n+i} y_i - x_i y_{n+i}, so omega(e_{n+i}, e_i) = +1,
// and J(q, p) = (p, -q) satisfies <J x, y> = omega(x, y), J^2 = -I.

#include "types.hpp"

#include <span>
#include <string_view>

namespace ehz {

namespace detail {
inline void require_even_pair(std::size_t a, std::size_t b) {
  if (a != b || a % 2 != 0 || a == 0)
    throw Error(ErrorKind::DimensionMismatch,
                "symplectic vectors must share an even, nonzero length");
}
}  // namespace detail

// Generic form so the exact-rational path shares the convention.
template <class T>
T omega(std::span<const T> x, std::span<const T> y) {
  detail::require_even_pair(x.size(), y.size());
  const std::size_t n = x.size() / 2;
  T acc{0};
  for (std::size_t i = 0; i < n; ++i) acc += x[n + i] * y[i] - x[i] * y[n + i];
  return acc;
}

double omega(const Vec& x, const Vec& y);

Vec j_apply(const Vec& x);

// Matrix of the form: omega(x, y) = x^T W y.
Mat omega_matrix(int n);

enum class SubspaceClass { Isotropic, Coisotropic, Lagrangian, Symplectic, Mixed };

std::string_view to_string(SubspaceClass c);

// Classifies span(columns of basis) against its omega-complement.
// Throws Degenerate when the columns are linearly dependent.
SubspaceClass classify_subspace(const Mat& basis, double tol = kGeomTol);

}  // namespace ehz
