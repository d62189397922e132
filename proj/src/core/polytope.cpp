#include "polytope.hpp"

#include "linear_program.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace ehz {

namespace {

double scale_of(const Vec& heights) {
  return std::max(1.0, heights.cwiseAbs().maxCoeff());
}

// Calls fn(indices) for every k-subset of {0..n-1} in lexicographic order.
template <class Fn>
void for_each_combination(int n, int k, Fn&& fn) {
  if (k > n || k <= 0) return;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    fn(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

bool lex_less(const Vec& a, const Vec& b, double tol) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i) < b(i) - tol) return true;
    if (a(i) > b(i) + tol) return false;
  }
  return false;
}

// Orthonormal basis (columns) of the span of the rows of `rows`.
Mat row_span(const Mat& rows, double tol) {
  if (rows.rows() == 0) return Mat(rows.cols(), 0);
  Eigen::JacobiSVD<Mat> svd(rows, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tol) ++r;
  return svd.matrixV().leftCols(r);
}

int affine_rank(const Mat& pts, double tol) {
  if (pts.rows() <= 1) return 0;
  Mat diff = pts.bottomRows(pts.rows() - 1).rowwise() - pts.row(0);
  return static_cast<int>(row_span(diff, tol).cols());
}

Vec support_lp(const Mat& normals, const Vec& heights, const Vec& v, double* value) {
  const int d = static_cast<int>(normals.cols());
  LinearProgram lp(d);
  for (int j = 0; j < d; ++j) lp.free_var[j] = true;
  lp.objective = -v;
  lp.a_le = normals;
  lp.b_le = heights;
  const LpResult r = solve_lp(lp);
  if (r.status == LpStatus::Unbounded)
    throw Error(ErrorKind::Unbounded, "support function is unbounded");
  if (!r.optimal()) throw Error(ErrorKind::Degenerate, "support LP failed");
  *value = -r.value;
  return r.x;
}

}  // namespace

HPolytope::HPolytope(Mat normals, Vec heights)
    : normals_(std::move(normals)), heights_(std::move(heights)) {
  if (normals_.rows() != heights_.size())
    throw Error(ErrorKind::DimensionMismatch, "one height per normal required");
  if (normals_.cols() == 0)
    throw Error(ErrorKind::DimensionMismatch, "zero-dimensional polytope");
  for (Eigen::Index i = 0; i < normals_.rows(); ++i) {
    const double len = normals_.row(i).norm();
    if (len < 1e-12) throw Error(ErrorKind::InvalidArgument, "zero facet normal");
    normals_.row(i) /= len;
    heights_(i) /= len;
  }
  for (Eigen::Index i = 0; i < normals_.rows(); ++i)
    for (Eigen::Index j = i + 1; j < normals_.rows(); ++j)
      if ((normals_.row(i) - normals_.row(j)).cwiseAbs().maxCoeff() < kGeomTol)
        throw Error(ErrorKind::InvalidArgument, "duplicate facet normals");

  const int d = dim();
  for (int j = 0; j < d; ++j) {
    for (double sgn : {1.0, -1.0}) {
      Vec e = Vec::Zero(d);
      e(j) = sgn;
      double val = 0.0;
      support_lp(normals_, heights_, e, &val);
    }
  }
  const ChebyshevBall ball = chebyshev_center(normals_, heights_);
  if (ball.radius <= kGeomTol * scale_of(heights_))
    throw Error(ErrorKind::Degenerate, "polytope is not full-dimensional");
}

bool HPolytope::contains(const Vec& x, double tol) const {
  return ((normals_ * x - heights_).array() <= tol).all();
}

HPolytope HPolytope::translated(const Vec& offset) const {
  return HPolytope(normals_, heights_ + normals_ * offset);
}

VPolytope::VPolytope(Mat vertices) : vertices_(std::move(vertices)) {
  if (vertices_.rows() == 0 || vertices_.cols() == 0)
    throw Error(ErrorKind::InvalidArgument, "empty vertex list");
}

double support(const HPolytope& k, const Vec& v) {
  if (v.size() != k.dim()) throw Error(ErrorKind::DimensionMismatch, "support direction");
  double value = 0.0;
  support_lp(k.normals(), k.heights(), v, &value);
  return value;
}

double support(const VPolytope& k, const Vec& v) {
  if (v.size() != k.dim()) throw Error(ErrorKind::DimensionMismatch, "support direction");
  return (k.vertices() * v).maxCoeff();
}

VPolytope vertices(const HPolytope& k) {
  const int d = k.dim();
  const int m = k.num_facets();
  const double tol = kGeomTol * scale_of(k.heights());
  std::vector<Vec> found;
  for_each_combination(m, d, [&](const std::vector<int>& idx) {
    Mat a(d, d);
    Vec b(d);
    for (int r = 0; r < d; ++r) {
      a.row(r) = k.normals().row(idx[r]);
      b(r) = k.heights()(idx[r]);
    }
    Eigen::FullPivLU<Mat> lu(a);
    lu.setThreshold(1e-10);
    if (!lu.isInvertible()) return;
    const Vec x = lu.solve(b);
    if (((k.normals() * x - k.heights()).array() > tol).any()) return;
    for (const Vec& y : found)
      if ((x - y).cwiseAbs().maxCoeff() < 10 * tol) return;
    found.push_back(x);
  });
  if (static_cast<int>(found.size()) < d + 1)
    throw Error(ErrorKind::Degenerate, "too few vertices for a full-dimensional body");
  std::sort(found.begin(), found.end(),
            [&](const Vec& a, const Vec& b) { return lex_less(a, b, 10 * tol); });
  Mat out(static_cast<Eigen::Index>(found.size()), d);
  for (std::size_t i = 0; i < found.size(); ++i) out.row(i) = found[i].transpose();
  return VPolytope(std::move(out));
}

namespace {

struct RawFacet {
  Vec normal;
  double height;
};

std::vector<RawFacet> hull_facets(const Mat& pts) {
  const int d = static_cast<int>(pts.cols());
  const int nv = static_cast<int>(pts.rows());
  double scale = 1.0;
  for (int i = 0; i < nv; ++i) scale = std::max(scale, pts.row(i).cwiseAbs().maxCoeff());
  const double tol = kGeomTol * scale;
  if (affine_rank(pts, tol) < d)
    throw Error(ErrorKind::Degenerate, "vertex set is not full-dimensional");

  std::vector<RawFacet> out;
  if (d == 1) {
    out.push_back({Vec::Constant(1, 1.0), pts.col(0).maxCoeff()});
    out.push_back({Vec::Constant(1, -1.0), -pts.col(0).minCoeff()});
    return out;
  }
  for_each_combination(nv, d, [&](const std::vector<int>& idx) {
    Mat diff(d - 1, d);
    for (int r = 1; r < d; ++r) diff.row(r - 1) = pts.row(idx[r]) - pts.row(idx[0]);
    Eigen::JacobiSVD<Mat> svd(diff, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    if (s(s.size() - 1) <= tol) return;  // affinely dependent subset
    Vec n = svd.matrixV().col(d - 1);
    n.normalize();
    double h = n.dot(pts.row(idx[0]).transpose());
    const Vec vals = pts * n;
    const bool below = (vals.array() <= h + tol).all();
    const bool above = (vals.array() >= h - tol).all();
    if (!below && !above) return;
    if (!below) {
      n = -n;
      h = -h;
    }
    for (const RawFacet& f : out)
      if ((f.normal - n).cwiseAbs().maxCoeff() < 1e-8) return;
    out.push_back({n, h});
  });
  return out;
}

}  // namespace

HPolytope facets(const VPolytope& k) {
  std::vector<RawFacet> raw = hull_facets(k.vertices());
  Mat normals(static_cast<Eigen::Index>(raw.size()), k.dim());
  Vec heights(static_cast<Eigen::Index>(raw.size()));
  for (std::size_t i = 0; i < raw.size(); ++i) {
    normals.row(i) = raw[i].normal.transpose();
    heights(i) = raw[i].height;
  }
  return canonical_order(HPolytope(std::move(normals), std::move(heights)));
}

PrunedPolytope remove_redundant(const HPolytope& k) {
  const VPolytope v = vertices(k);
  const double tol = 1e-8 * scale_of(k.heights());
  std::vector<int> keep;
  for (int i = 0; i < k.num_facets(); ++i) {
    std::vector<int> on;
    for (int j = 0; j < v.num_vertices(); ++j)
      if (std::abs(k.normal(i).dot(v.vertex(j)) - k.height(i)) <= tol) on.push_back(j);
    if (static_cast<int>(on.size()) < k.dim()) continue;
    Mat pts(static_cast<Eigen::Index>(on.size()), k.dim());
    for (std::size_t r = 0; r < on.size(); ++r) pts.row(r) = v.vertices().row(on[r]);
    if (affine_rank(pts, tol) == k.dim() - 1) keep.push_back(i);
  }
  Mat normals(static_cast<Eigen::Index>(keep.size()), k.dim());
  Vec heights(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t r = 0; r < keep.size(); ++r) {
    normals.row(r) = k.normals().row(keep[r]);
    heights(r) = k.height(keep[r]);
  }
  return {HPolytope(std::move(normals), std::move(heights)), keep};
}

ChebyshevBall chebyshev_center(const Mat& normals, const Vec& heights) {
  const int d = static_cast<int>(normals.cols());
  LinearProgram lp(d + 1);
  for (int j = 0; j < d; ++j) lp.free_var[j] = true;
  lp.objective(d) = -1.0;
  lp.a_le.resize(normals.rows() + 1, d + 1);
  lp.a_le.setZero();
  lp.a_le.topLeftCorner(normals.rows(), d) = normals;
  for (Eigen::Index i = 0; i < normals.rows(); ++i) lp.a_le(i, d) = normals.row(i).norm();
  lp.a_le(normals.rows(), d) = 1.0;  // caps the radius for unbounded input
  lp.b_le.resize(normals.rows() + 1);
  lp.b_le.head(normals.rows()) = heights;
  lp.b_le(normals.rows()) = 1e6;
  const LpResult r = solve_lp(lp);
  if (!r.optimal()) throw Error(ErrorKind::Degenerate, "empty polytope");
  return {r.x.head(d), r.x(d)};
}

ChebyshevBall chebyshev_center(const HPolytope& k) {
  return chebyshev_center(k.normals(), k.heights());
}

namespace {

// Volume of conv(pts) inside R^d, pts full-dimensional there.
double hull_volume(const Mat& pts) {
  const int d = static_cast<int>(pts.cols());
  if (d == 1) return pts.col(0).maxCoeff() - pts.col(0).minCoeff();
  const Vec center = pts.colwise().mean().transpose();
  double scale = 1.0;
  for (Eigen::Index i = 0; i < pts.rows(); ++i)
    scale = std::max(scale, pts.row(i).cwiseAbs().maxCoeff());
  const double tol = 1e-8 * scale;
  double total = 0.0;
  for (const RawFacet& f : hull_facets(pts)) {
    std::vector<Eigen::Index> on;
    for (Eigen::Index i = 0; i < pts.rows(); ++i)
      if (std::abs(f.normal.dot(pts.row(i).transpose()) - f.height) <= tol) on.push_back(i);
    // Orthonormal basis of the facet hyperplane.
    Eigen::HouseholderQR<Mat> qr(f.normal);
    const Mat q = qr.householderQ();
    const Mat basis = q.rightCols(d - 1);
    Mat local(static_cast<Eigen::Index>(on.size()), d - 1);
    for (std::size_t r = 0; r < on.size(); ++r)
      local.row(r) = (basis.transpose() * (pts.row(on[r]).transpose() - center)).transpose();
    const double dist = f.height - f.normal.dot(center);
    total += dist * hull_volume(local) / d;
  }
  return total;
}

}  // namespace

double volume(const VPolytope& k) { return hull_volume(k.vertices()); }

double volume(const HPolytope& k) {
  const VPolytope v = vertices(k);
  const Vec center = chebyshev_center(k).center;
  const int d = k.dim();
  if (d == 1) return hull_volume(v.vertices());
  const double tol = 1e-8 * scale_of(k.heights());
  double total = 0.0;
  for (int i = 0; i < k.num_facets(); ++i) {
    std::vector<int> on;
    for (int j = 0; j < v.num_vertices(); ++j)
      if (std::abs(k.normal(i).dot(v.vertex(j)) - k.height(i)) <= tol) on.push_back(j);
    if (static_cast<int>(on.size()) < d) continue;
    Eigen::HouseholderQR<Mat> qr(k.normal(i));
    const Mat q = qr.householderQ();
    const Mat basis = q.rightCols(d - 1);
    Mat local(static_cast<Eigen::Index>(on.size()), d - 1);
    for (std::size_t r = 0; r < on.size(); ++r)
      local.row(r) = (basis.transpose() * (v.vertex(on[r]) - center)).transpose();
    if (affine_rank(local, tol) < d - 1) continue;
    total += (k.height(i) - k.normal(i).dot(center)) * hull_volume(local) / d;
  }
  return total;
}

std::vector<Face> face_lattice(const HPolytope& k, int max_dim) {
  if (k.dim() > max_dim)
    throw Error(ErrorKind::InvalidArgument, "face lattice enumeration limited to low dimension");
  const VPolytope v = vertices(k);
  const int d = k.dim();
  const int nv = v.num_vertices();
  const int m = k.num_facets();
  const double tol = 1e-8 * scale_of(k.heights());

  std::vector<std::vector<int>> facet_verts(m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < nv; ++j)
      if (std::abs(k.normal(i).dot(v.vertex(j)) - k.height(i)) <= tol) facet_verts[i].push_back(j);

  auto vertex_block = [&](const std::vector<int>& ids) {
    Mat pts(static_cast<Eigen::Index>(ids.size()), d);
    for (std::size_t r = 0; r < ids.size(); ++r) pts.row(r) = v.vertices().row(ids[r]);
    return pts;
  };

  std::set<std::vector<int>> seen;
  std::vector<std::vector<int>> queue;
  for (int i = 0; i < m; ++i) {
    const auto& fv = facet_verts[i];
    if (static_cast<int>(fv.size()) < d) continue;
    if (affine_rank(vertex_block(fv), tol) != d - 1) continue;
    if (seen.insert(fv).second) queue.push_back(fv);
  }
  for (std::size_t q = 0; q < queue.size(); ++q) {
    const std::vector<int> cur = queue[q];
    for (int i = 0; i < m; ++i) {
      std::vector<int> inter;
      std::set_intersection(cur.begin(), cur.end(), facet_verts[i].begin(), facet_verts[i].end(),
                            std::back_inserter(inter));
      if (inter.empty() || inter.size() == cur.size()) continue;
      if (seen.insert(inter).second) queue.push_back(inter);
    }
  }

  std::vector<Face> faces;
  faces.reserve(queue.size());
  for (const auto& verts : queue) {
    Face f;
    f.vertices = verts;
    for (int i = 0; i < m; ++i)
      if (std::includes(facet_verts[i].begin(), facet_verts[i].end(), verts.begin(), verts.end()))
        f.active.push_back(i);
    const Mat pts = vertex_block(verts);
    if (pts.rows() > 1) {
      Mat diff = pts.bottomRows(pts.rows() - 1).rowwise() - pts.row(0);
      f.tangent = row_span(diff, tol);
    } else {
      f.tangent = Mat(d, 0);
    }
    f.dim = static_cast<int>(f.tangent.cols());
    f.normal_cone.resize(d, static_cast<Eigen::Index>(f.active.size()));
    for (std::size_t c = 0; c < f.active.size(); ++c) f.normal_cone.col(c) = k.normal(f.active[c]);
    if (f.dim > 0 && d % 2 == 0) {
      f.tangent_class = classify_subspace(f.tangent);
      f.has_tangent_class = true;
    }
    faces.push_back(std::move(f));
  }
  std::sort(faces.begin(), faces.end(), [](const Face& a, const Face& b) {
    if (a.dim != b.dim) return a.dim > b.dim;
    return a.active < b.active;
  });
  return faces;
}

std::vector<Face> lagrangian_faces(const HPolytope& k) {
  if (k.dim() % 2 != 0) throw Error(ErrorKind::DimensionMismatch, "odd ambient dimension");
  const int n = k.dim() / 2;
  std::vector<Face> out;
  for (Face& f : face_lattice(k))
    if (f.dim == n && f.has_tangent_class && f.tangent_class == SubspaceClass::Lagrangian)
      out.push_back(std::move(f));
  return out;
}

HPolytope canonical_order(const HPolytope& k) {
  std::vector<int> idx(k.num_facets());
  for (int i = 0; i < k.num_facets(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    return lex_less(k.normal(a), k.normal(b), 1e-12);
  });
  Mat normals(k.num_facets(), k.dim());
  Vec heights(k.num_facets());
  for (int r = 0; r < k.num_facets(); ++r) {
    normals.row(r) = k.normals().row(idx[r]);
    heights(r) = k.height(idx[r]);
  }
  return HPolytope(std::move(normals), std::move(heights));
}

HPolytope scaled(const HPolytope& k, double factor) {
  if (!(factor > 0.0)) throw Error(ErrorKind::InvalidArgument, "scale factor must be positive");
  return HPolytope(k.normals(), k.heights() * factor);
}

HPolytope linear_image(const HPolytope& k, const Mat& m) {
  if (m.rows() != k.dim() || m.cols() != k.dim())
    throw Error(ErrorKind::DimensionMismatch, "linear map must be square of the body dimension");
  Eigen::FullPivLU<Mat> lu(m);
  if (!lu.isInvertible()) throw Error(ErrorKind::Degenerate, "linear map is not invertible");
  // {Mx : <x,n> <= h} = {y : <y, M^{-T} n> <= h}
  const Mat inv_t = lu.inverse().transpose();
  Mat normals = (inv_t * k.normals().transpose()).transpose();
  return HPolytope(std::move(normals), k.heights());
}

}  // namespace ehz
