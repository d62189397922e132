#pragma once

// Convex polytopes in R^d by half-spaces or vertices, brute-force conversions
// between the two, volume, and the face lattice with symplectic data.

#include "symplectic.hpp"
#include "types.hpp"

#include <vector>

namespace ehz {

class VPolytope;

// K = { x : <x, n_i> <= h_i } with unit outer normals n_i (stored as rows).
// Heights may be zero or negative; boundedness and full dimension are checked
// on construction, and duplicate normals are rejected.
class HPolytope {
 public:
  HPolytope(Mat normals, Vec heights);

  int dim() const { return static_cast<int>(normals_.cols()); }
  int num_facets() const { return static_cast<int>(normals_.rows()); }
  const Mat& normals() const { return normals_; }
  const Vec& heights() const { return heights_; }
  Vec normal(int i) const { return normals_.row(i).transpose(); }
  double height(int i) const { return heights_(i); }

  bool contains(const Vec& x, double tol = kGeomTol) const;
  HPolytope translated(const Vec& offset) const;

 private:
  Mat normals_;
  Vec heights_;
};

// Convex hull of the stored points; canonicalization keeps extreme points only.
class VPolytope {
 public:
  explicit VPolytope(Mat vertices);  // one vertex per row

  int dim() const { return static_cast<int>(vertices_.cols()); }
  int num_vertices() const { return static_cast<int>(vertices_.rows()); }
  const Mat& vertices() const { return vertices_; }
  Vec vertex(int i) const { return vertices_.row(i).transpose(); }

 private:
  Mat vertices_;
};

double support(const HPolytope& k, const Vec& v);
double support(const VPolytope& k, const Vec& v);

VPolytope vertices(const HPolytope& k);
HPolytope facets(const VPolytope& k);

// Drops facets that do not carry a (d-1)-dimensional set of vertices.
// The second member maps new facet indices to the old ones.
struct PrunedPolytope {
  HPolytope body;
  std::vector<int> origin;
};
PrunedPolytope remove_redundant(const HPolytope& k);

struct ChebyshevBall {
  Vec center;
  double radius = 0.0;
};
ChebyshevBall chebyshev_center(const Mat& normals, const Vec& heights);
ChebyshevBall chebyshev_center(const HPolytope& k);

double volume(const HPolytope& k);
double volume(const VPolytope& k);

struct Face {
  std::vector<int> active;    // facet indices, ascending
  std::vector<int> vertices;  // indices into vertices(K), ascending
  int dim = 0;
  Mat tangent;                // orthonormal columns spanning the face directions
  Mat normal_cone;            // generators as columns (the active unit normals)
  SubspaceClass tangent_class = SubspaceClass::Mixed;
  bool has_tangent_class = false;  // false for vertices (zero tangent space)
};

// All nonempty proper faces, sorted by decreasing dimension then by active set.
std::vector<Face> face_lattice(const HPolytope& k, int max_dim = 4);
std::vector<Face> lagrangian_faces(const HPolytope& k);

// Lexicographic order on facet normals; used by the JSON writer.
HPolytope canonical_order(const HPolytope& k);

HPolytope scaled(const HPolytope& k, double factor);
HPolytope linear_image(const HPolytope& k, const Mat& m);

}  // namespace ehz
