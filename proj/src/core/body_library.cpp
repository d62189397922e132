#include "body_library.hpp"

#include <cmath>
#include <numbers>

namespace ehz {

namespace {

void require_even(int dim) {
  if (dim <= 0 || dim % 2 != 0)
    throw Error(ErrorKind::InvalidArgument, "dimension must be even and positive");
}

const HPolytope& need_base(const BodyParams& p, const char* name) {
  if (!p.base) throw Error(ErrorKind::InvalidArgument, std::string(name) + " needs a base body");
  return *p.base;
}

}  // namespace

HPolytope standard_simplex(int dim) {
  require_even(dim);
  Mat normals = Mat::Zero(dim + 1, dim);
  Vec heights = Vec::Zero(dim + 1);
  for (int i = 0; i < dim; ++i) normals(i, i) = -1.0;
  normals.row(dim).setOnes();
  heights(dim) = 1.0;
  return canonical_order(HPolytope(normals, heights));
}

HPolytope box(const Vec& lower, const Vec& upper) {
  const int d = static_cast<int>(lower.size());
  if (upper.size() != d) throw Error(ErrorKind::DimensionMismatch, "box bounds differ in length");
  require_even(d);
  Mat normals = Mat::Zero(2 * d, d);
  Vec heights(2 * d);
  for (int i = 0; i < d; ++i) {
    if (!(upper(i) > lower(i))) throw Error(ErrorKind::InvalidArgument, "empty box side");
    normals(i, i) = 1.0;
    heights(i) = upper(i);
    normals(d + i, i) = -1.0;
    heights(d + i) = -lower(i);
  }
  return canonical_order(HPolytope(normals, heights));
}

HPolytope cross_polytope(int dim) {
  require_even(dim);
  const int count = 1 << dim;
  Mat normals(count, dim);
  for (int s = 0; s < count; ++s)
    for (int i = 0; i < dim; ++i) normals(s, i) = (s >> i) & 1 ? -1.0 : 1.0;
  return canonical_order(HPolytope(normals, Vec::Ones(count)));
}

Mat rotated_cross_matrix() {
  const double r2 = std::sqrt(2.0) / 2.0, r3 = 1.0 / std::sqrt(3.0), r6 = 1.0 / std::sqrt(6.0);
  Mat a(4, 4);
  a << 1, 0, 0, 0,
       0, r2, 0, -r2,
       0, r3, r3, r3,
       0, r6, -std::sqrt(2.0 / 3.0), r6;
  return a;
}

HPolytope rotated_cross_polytope() {
  return canonical_order(linear_image(cross_polytope(4), rotated_cross_matrix()));
}

HPolytope twenty_four_cell() {
  Mat v(24, 4);
  int r = 0;
  for (int i = 0; i < 4; ++i)
    for (double s : {1.0, -1.0}) {
      v.row(r).setZero();
      v(r++, i) = s;
    }
  for (int s = 0; s < 16; ++s) {
    for (int i = 0; i < 4; ++i) v(r, i) = (s >> i) & 1 ? -0.5 : 0.5;
    ++r;
  }
  return canonical_order(facets(VPolytope(v)));
}

HPolytope body_y() {
  Mat normals = Mat::Zero(9, 4);
  Vec heights = Vec::Zero(9);
  for (int i = 0; i < 4; ++i) {
    normals(i, i) = 1.0;
    heights(i) = 0.5;
    normals(4 + i, i) = -1.0;
  }
  normals.row(8).setConstant(0.5);
  heights(8) = 0.5;
  return canonical_order(HPolytope(normals, heights));
}

HPolytope regular_polygon(int sides, double rotation) {
  if (sides < 3) throw Error(ErrorKind::InvalidArgument, "a polygon needs at least 3 sides");
  const double pi = std::numbers::pi;
  Mat normals(sides, 2);
  Vec heights(sides);
  for (int i = 0; i < sides; ++i) {
    // Edge between vertices at angles a_i and a_{i+1}; normal at their midpoint.
    const double mid = pi / 2.0 + rotation + (2.0 * i + 1.0) * pi / sides;
    normals(i, 0) = std::cos(mid);
    normals(i, 1) = std::sin(mid);
    heights(i) = std::cos(pi / sides);
  }
  for (Eigen::Index i = 0; i < normals.size(); ++i)
    if (std::abs(normals.data()[i]) < 1e-15) normals.data()[i] = 0.0;
  return canonical_order(HPolytope(normals, heights));
}

HPolytope lagrangian_product(const HPolytope& q_factor, const HPolytope& p_factor) {
  const int n = q_factor.dim();
  if (p_factor.dim() != n)
    throw Error(ErrorKind::DimensionMismatch, "product factors must share a dimension");
  const int kq = q_factor.num_facets(), kp = p_factor.num_facets();
  Mat normals = Mat::Zero(kq + kp, 2 * n);
  Vec heights(kq + kp);
  normals.topLeftCorner(kq, n) = q_factor.normals();
  heights.head(kq) = q_factor.heights();
  normals.bottomRightCorner(kp, n) = p_factor.normals();
  heights.tail(kp) = p_factor.heights();
  return HPolytope(normals, heights);
}

HPolytope pentagon_product() {
  return lagrangian_product(regular_polygon(5), regular_polygon(5, std::numbers::pi / 2.0));
}

const std::vector<std::string>& body_names() {
  static const std::vector<std::string> names = {
      "simplex",  "box", "cube",  "cross-polytope", "rotated-cross-polytope",
      "24-cell",  "Y",   "pentagon-product", "regular-polygon", "lagrangian-product",
      "linear-image", "translate", "scale"};
  return names;
}

HPolytope make_body(const std::string& name, const BodyParams& p) {
  if (name == "simplex") return standard_simplex(p.dim);
  if (name == "cube") return box(Vec::Zero(p.dim), Vec::Ones(p.dim));
  if (name == "box") {
    if (p.lower.empty() && p.upper.empty()) return box(Vec::Zero(p.dim), Vec::Ones(p.dim));
    return box(Eigen::Map<const Vec>(p.lower.data(), static_cast<Eigen::Index>(p.lower.size())),
               Eigen::Map<const Vec>(p.upper.data(), static_cast<Eigen::Index>(p.upper.size())));
  }
  if (name == "cross-polytope") return cross_polytope(p.dim);
  if (name == "rotated-cross-polytope") return rotated_cross_polytope();
  if (name == "24-cell") return twenty_four_cell();
  if (name == "Y") return body_y();
  if (name == "pentagon-product") return pentagon_product();
  if (name == "regular-polygon") return regular_polygon(p.sides, p.rotation);
  if (name == "lagrangian-product") {
    if (!p.second) throw Error(ErrorKind::InvalidArgument, "lagrangian-product needs two factors");
    return lagrangian_product(need_base(p, "lagrangian-product"), *p.second);
  }
  if (name == "linear-image") return linear_image(need_base(p, "linear-image"), p.matrix);
  if (name == "translate") return need_base(p, "translate").translated(p.offset);
  if (name == "scale") return scaled(need_base(p, "scale"), p.factor);
  throw Error(ErrorKind::InvalidArgument, "unknown body: " + name);
}

}  // namespace ehz
