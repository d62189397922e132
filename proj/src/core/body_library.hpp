#pragma once

// Named bodies with fixed coordinates. Facets come in lexicographic normal
// order, except Lagrangian products which list the q-factor facets first.

#include "polytope.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ehz {

struct BodyParams {
  int dim = 4;                     // simplex, cube, box, cross-polytope
  int sides = 5;                   // regular-polygon
  double rotation = 0.0;           // regular-polygon: extra rotation (radians)
  std::vector<double> lower, upper;  // box bounds (default [0,1]^dim)
  double factor = 1.0;             // scale
  Vec offset;                      // translate
  Mat matrix;                      // linear-image
  std::optional<HPolytope> base;   // operand of linear-image/translate/scale, or q-factor
  std::optional<HPolytope> second; // p-factor of lagrangian-product
};

HPolytope make_body(const std::string& name, const BodyParams& params = {});
const std::vector<std::string>& body_names();

// Individual constructors.
HPolytope standard_simplex(int dim);
HPolytope box(const Vec& lower, const Vec& upper);
HPolytope cross_polytope(int dim);
Mat rotated_cross_matrix();
HPolytope rotated_cross_polytope();
HPolytope twenty_four_cell();
HPolytope body_y();
// Circumradius 1, one vertex at angle 90 degrees + rotation.
HPolytope regular_polygon(int sides, double rotation = 0.0);
HPolytope lagrangian_product(const HPolytope& q_factor, const HPolytope& p_factor);
HPolytope pentagon_product();

}  // namespace ehz
