#pragma once

// Polygonal closed characteristics on the boundary of a polytope: lifting a
// maximizing sequence, action, splitting along a cut, gluing, and per-edge
// labels of the dynamics.

#include "cuts.hpp"

#include <string>
#include <vector>

namespace ehz {

// Edge i runs from vertex i to vertex i+1 (cyclically) with vector
// times[i] * J normals[i]; facets[i] is the label in the owning body, -1 when
// the edge runs along a cut hyperplane that is not a facet of that body.
struct ClosedOrbit {
  Mat vertices;  // one point per row
  std::vector<int> facets;
  std::vector<Vec> normals;
  std::vector<double> times;
  double action = 0.0;

  int size() const { return static_cast<int>(vertices.rows()); }
  Vec vertex(int i) const { return vertices.row(i).transpose(); }
  Vec edge(int i) const;
};

struct LiftResult {
  bool ok = false;
  std::string reason;
  ClosedOrbit orbit;
  double incidence_residual = 0.0;   // max |<p, n> - h| over edge endpoints
  double containment_excess = 0.0;   // max (<p, n_j> - h_j)_+ over vertices
  double action_residual = 0.0;      // |action - 1/(2Q)|
};

// Edge vectors 2 c beta_i J n_i with c = 1/(2Q), traversed in reversed
// sequence order; the start point solves the facet incidences.
LiftResult orbit_from_sequence(const HPolytope& k, const CapacitySequence& seq, double tol = 1e-8);

// 1/2 |sum omega(p_i, p_{i+1})|; throws when the edge data does not close.
double orbit_action(const ClosedOrbit& orbit, double tol = 1e-8);
double polygon_action(const Mat& vertices);

struct OrbitCheck {
  bool ok = false;
  std::string reason;
  double closure = 0.0;
  double incidence = 0.0;
  double containment = 0.0;
  double cone = 0.0;  // worst cone-membership residual
};

// Closure, incidence on the labeled facets (matched by normal), containment,
// and -J(direction) in the normal cone of the face carrying each edge.
OrbitCheck verify_orbit(const HPolytope& k, const ClosedOrbit& orbit, double tol = 1e-8,
                        double cone_tol = 1e-9);

struct SplitResult {
  bool ok = false;
  std::string reason;
  int crossings = 0;
  ClosedOrbit orbit1;  // on the piece {<x,v> >= level}
  ClosedOrbit orbit2;  // on the piece {<x,v> <= level}
};

SplitResult split_orbit(const HPolytope& k, const ClosedOrbit& orbit, const CutSpec& spec,
                        double tol = 1e-8);

// Inverse of split_orbit: orbit1 carries one edge along -J v, orbit2 one along
// +J v of equal length. Throws InvalidArgument on a mismatch. Facet labels
// are taken from `body` by normal when given, otherwise set to -1.
ClosedOrbit glue_orbits(const ClosedOrbit& orbit1, const ClosedOrbit& orbit2, const Vec& v,
                        const HPolytope* body = nullptr, double tol = 1e-9);

// True when a and b trace the same loop: equal turning vertices within tol up
// to a cyclic shift, ignoring subdivision points on straight runs.
bool same_cycle(const ClosedOrbit& a, const ClosedOrbit& b, double tol = 1e-9);

enum class EdgeKind { ExtremeRay, CoisotropicFace, IsotropicAmbiguous };
std::string_view to_string(EdgeKind kind);

struct EdgeLabel {
  EdgeKind kind = EdgeKind::IsotropicAmbiguous;
  std::vector<int> active;  // facets of the smallest face carrying the edge
  int face_dim = 0;
};

std::vector<EdgeLabel> classify_orbit_edges(const HPolytope& k, const ClosedOrbit& orbit,
                                            double tol = 1e-8);

}  // namespace ehz
