#include "symplectic.hpp"

namespace ehz {

double omega(const Vec& x, const Vec& y) {
  detail::require_even_pair(static_cast<std::size_t>(x.size()),
                            static_cast<std::size_t>(y.size()));
  const Eigen::Index n = x.size() / 2;
  return x.tail(n).dot(y.head(n)) - x.head(n).dot(y.tail(n));
}

Vec j_apply(const Vec& x) {
  if (x.size() == 0 || x.size() % 2 != 0)
    throw Error(ErrorKind::DimensionMismatch, "j_apply needs an even, nonzero length");
  const Eigen::Index n = x.size() / 2;
  Vec out(x.size());
  out.head(n) = x.tail(n);
  out.tail(n) = -x.head(n);
  return out;
}

Mat omega_matrix(int n) {
  Mat w = Mat::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    w(n + i, i) = 1.0;
    w(i, n + i) = -1.0;
  }
  return w;
}

std::string_view to_string(SubspaceClass c) {
  switch (c) {
    case SubspaceClass::Isotropic: return "isotropic";
    case SubspaceClass::Coisotropic: return "coisotropic";
    case SubspaceClass::Lagrangian: return "Lagrangian";
    case SubspaceClass::Symplectic: return "symplectic";
    case SubspaceClass::Mixed: return "mixed";
  }
  return "mixed";
}

namespace {
int numeric_rank(const Mat& m, double tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& s = svd.singularValues();
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tol) ++r;
  return r;
}
}  // namespace

SubspaceClass classify_subspace(const Mat& basis, double tol) {
  if (basis.rows() == 0 || basis.rows() % 2 != 0)
    throw Error(ErrorKind::DimensionMismatch, "basis vectors must live in R^{2n}");
  const int k = static_cast<int>(basis.cols());
  if (k == 0) throw Error(ErrorKind::InvalidArgument, "empty basis");
  // Orthonormalize first so the classification only depends on the span.
  if (numeric_rank(basis, tol * std::max(1.0, basis.norm())) < k)
    throw Error(ErrorKind::Degenerate, "basis vectors are linearly dependent");
  Eigen::HouseholderQR<Mat> qr(basis);
  const Mat q = qr.householderQ() * Mat::Identity(basis.rows(), k);

  const int n = static_cast<int>(basis.rows() / 2);
  const Mat gram = q.transpose() * omega_matrix(n) * q;
  const int rg = numeric_rank(gram, tol);
  // dim(V ∩ V^w) = k - rank(gram); dim V^w = 2n - k.
  const bool isotropic = rg == 0;
  const bool coisotropic = (k - rg) == (2 * n - k);
  if (isotropic && coisotropic) return SubspaceClass::Lagrangian;
  if (isotropic) return SubspaceClass::Isotropic;
  if (coisotropic) return SubspaceClass::Coisotropic;
  if (rg == k) return SubspaceClass::Symplectic;
  return SubspaceClass::Mixed;
}

}  // namespace ehz
