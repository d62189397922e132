#include "body_library.hpp"
#include "polytope.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

using namespace ehz;
using testutil::unit;
using testutil::vec;

namespace {

int facet_with_normal(const HPolytope& k, const Vec& n) {
  for (int i = 0; i < k.num_facets(); ++i)
    if ((k.normal(i) - n).norm() < 1e-9) return i;
  return -1;
}

bool has_vertex(const VPolytope& p, const Vec& x) {
  for (int i = 0; i < p.num_vertices(); ++i)
    if ((p.vertex(i) - x).norm() < 1e-9) return true;
  return false;
}

std::map<int, int> faces_by_dim(const std::vector<Face>& faces) {
  std::map<int, int> out;
  for (const Face& f : faces) ++out[f.dim];
  return out;
}

}  // namespace

TEST_CASE("construction guards") {
  Mat n(2, 2);
  n << 1, 0, 0, 1;
  CHECK_THROWS_AS(HPolytope(n, vec({1, 1})), Error);  // unbounded
  Mat dup(4, 2);
  dup << 1, 0, 1, 0, -1, 0, 0, -1;
  CHECK_THROWS_AS(HPolytope(dup, vec({1, 2, 0, 0})), Error);
  Mat flat(4, 2);
  flat << 1, 0, -1, 0, 0, 1, 0, -1;
  CHECK_THROWS_AS(HPolytope(flat, vec({0, 0, 1, 1})), Error);  // x = 0 slab
  CHECK_THROWS_AS(HPolytope(flat, vec({1, 1, 1})), Error);
}

TEST_CASE("support function") {
  CHECK(support(standard_simplex(4), unit(4, 0)) == doctest::Approx(1.0).epsilon(1e-12));
  const HPolytope y = body_y();
  CHECK(support(y, vec({0.5, 0.5, 0.5, 0.5})) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(support(y, -unit(4, 0))) < 1e-12);
  CHECK_THROWS_AS(support(y, Vec::Zero(3)), Error);
}

TEST_CASE("vertex enumeration") {
  CHECK(vertices(box(Vec::Zero(4), Vec::Ones(4))).num_vertices() == 16);
  const VPolytope s = vertices(standard_simplex(4));
  CHECK(s.num_vertices() == 5);
  CHECK(has_vertex(s, Vec::Zero(4)));
  for (int i = 0; i < 4; ++i) CHECK(has_vertex(s, unit(4, i)));

  const VPolytope y = vertices(body_y());
  CHECK(y.num_vertices() == 11);
  CHECK(has_vertex(y, Vec::Zero(4)));
  for (int i = 0; i < 4; ++i) {
    CHECK(has_vertex(y, 0.5 * unit(4, i)));
    for (int j = i + 1; j < 4; ++j) CHECK(has_vertex(y, 0.5 * unit(4, i) + 0.5 * unit(4, j)));
  }
}

TEST_CASE("facet enumeration") {
  Mat simplex = Mat::Zero(5, 4);
  for (int i = 0; i < 4; ++i) simplex(i + 1, i) = 1.0;
  CHECK(facets(VPolytope(simplex)).num_facets() == 5);

  Mat square(4, 2);
  square << 0, 0, 1, 0, 1, 1, 0, 1;
  CHECK(facets(VPolytope(square)).num_facets() == 4);

  // 24-cell: vertices -> facets -> vertices recovers the input set.
  const HPolytope x = twenty_four_cell();
  CHECK(x.num_facets() == 24);
  const VPolytope xv = vertices(x);
  CHECK(xv.num_vertices() == 24);
  for (int i = 0; i < 4; ++i) CHECK(has_vertex(xv, unit(4, i)));
  CHECK(has_vertex(xv, vec({0.5, -0.5, 0.5, -0.5})));
  CHECK(facets(xv).num_facets() == 24);
}

TEST_CASE("interior points do not produce facets or vertices") {
  Mat pts(5, 2);
  pts << 0, 0, 1, 0, 1, 1, 0, 1, 0.5, 0.5;
  const HPolytope sq = facets(VPolytope(pts));
  CHECK(sq.num_facets() == 4);
  CHECK(vertices(sq).num_vertices() == 4);
}

TEST_CASE("volume") {
  CHECK(volume(standard_simplex(4)) == doctest::Approx(1.0 / 24).epsilon(1e-12));
  CHECK(volume(body_y()) == doctest::Approx(1.0 / 32).epsilon(1e-12));
  CHECK(volume(box(Vec::Zero(4), Vec::Ones(4))) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(volume(twenty_four_cell()) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(volume(cross_polytope(4)) == doctest::Approx(2.0 / 3).epsilon(1e-12));
  CHECK(volume(rotated_cross_polytope()) == doctest::Approx(2.0 / 3).epsilon(1e-12));
}

TEST_CASE("redundant half-spaces are removed") {
  Mat n(5, 2);
  n << 1, 0, -1, 0, 0, 1, 0, -1, 0.6, 0.8;
  const PrunedPolytope p = remove_redundant(HPolytope(n, vec({1, 1, 1, 1, 5})));
  CHECK(p.body.num_facets() == 4);
  CHECK(p.origin == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("chebyshev center of a box") {
  const ChebyshevBall b = chebyshev_center(box(Vec::Zero(2), vec({4, 2})));
  CHECK(b.radius == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(b.center(1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("face lattice of the cube and simplex") {
  const auto cube = faces_by_dim(face_lattice(box(Vec::Zero(4), Vec::Ones(4))));
  CHECK(cube.at(3) == 8);
  CHECK(cube.at(2) == 24);
  CHECK(cube.at(1) == 32);
  CHECK(cube.at(0) == 16);
  CHECK(face_lattice(standard_simplex(4)).size() == 30);
}

TEST_CASE("face lattice of Y contains the coordinate 2-face at the origin") {
  const HPolytope y = body_y();
  const int a = facet_with_normal(y, -unit(4, 0));
  const int b = facet_with_normal(y, -unit(4, 1));
  std::vector<int> want{a, b};
  std::sort(want.begin(), want.end());
  bool found = false;
  for (const Face& f : face_lattice(y))
    if (f.active == want) {
      found = true;
      CHECK(f.dim == 2);
      CHECK(f.normal_cone.cols() == 2);
    }
  CHECK(found);
}

TEST_CASE("lagrangian faces") {
  CHECK(lagrangian_faces(twenty_four_cell()).empty());
  CHECK(lagrangian_faces(rotated_cross_polytope()).empty());
  CHECK(lagrangian_faces(box(Vec::Zero(4), Vec::Ones(4))).size() == 16);

  // Y: one active normal in {+-e1, +-e3} and one in {+-e2, +-e4}, over every
  // such pair that carries a 2-face.
  const HPolytope y = body_y();
  std::set<int> group1, group2;
  for (double s : {1.0, -1.0}) {
    group1.insert(facet_with_normal(y, s * unit(4, 0)));
    group1.insert(facet_with_normal(y, s * unit(4, 2)));
    group2.insert(facet_with_normal(y, s * unit(4, 1)));
    group2.insert(facet_with_normal(y, s * unit(4, 3)));
  }
  std::set<std::vector<int>> predicted;
  for (const Face& f : face_lattice(y)) {
    if (f.dim != 2 || f.active.size() != 2) continue;
    const int a = f.active[0], b = f.active[1];
    if ((group1.count(a) && group2.count(b)) || (group1.count(b) && group2.count(a)))
      predicted.insert(f.active);
  }
  std::set<std::vector<int>> got;
  for (const Face& f : lagrangian_faces(y)) {
    CHECK(f.dim == 2);
    CHECK(f.tangent_class == SubspaceClass::Lagrangian);
    got.insert(f.active);
  }
  CHECK(got.size() == 12);
  CHECK(got == predicted);
}

TEST_CASE("scaling and linear images") {
  const HPolytope s = standard_simplex(4);
  CHECK(volume(scaled(s, 2.0)) == doctest::Approx(16.0 / 24).epsilon(1e-12));
  CHECK_THROWS_AS(scaled(s, 0.0), Error);
  Mat m = Mat::Identity(4, 4);
  m(0, 1) = 3.0;
  CHECK(volume(linear_image(s, m)) == doctest::Approx(1.0 / 24).epsilon(1e-12));
  CHECK_THROWS_AS(linear_image(s, Mat::Zero(4, 4)), Error);
  const HPolytope t = s.translated(vec({1, 2, 3, 4}));
  CHECK(t.contains(vec({1.1, 2.1, 3.1, 4.1})));
  CHECK_FALSE(t.contains(Vec::Zero(4)));
}

TEST_CASE("library bodies") {
  const HPolytope y = body_y();
  CHECK(y.num_facets() == 9);
  for (int i = 0; i < 4; ++i) {
    const int plus = facet_with_normal(y, unit(4, i));
    const int minus = facet_with_normal(y, -unit(4, i));
    REQUIRE(plus >= 0);
    REQUIRE(minus >= 0);
    CHECK(y.height(plus) == doctest::Approx(0.5));
    CHECK(std::abs(y.height(minus)) < 1e-15);
  }
  const int es = facet_with_normal(y, vec({0.5, 0.5, 0.5, 0.5}));
  REQUIRE(es >= 0);
  CHECK(y.height(es) == doctest::Approx(0.5));

  CHECK(pentagon_product().num_facets() == 10);
  CHECK(rotated_cross_polytope().num_facets() == 16);
  CHECK(regular_polygon(7).num_facets() == 7);
  CHECK_THROWS_AS(make_body("no-such-body"), Error);
  CHECK(std::find(body_names().begin(), body_names().end(), "Y") != body_names().end());
}
