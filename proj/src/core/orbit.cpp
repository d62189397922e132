#include "orbit.hpp"

#include "linear_program.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ehz {

namespace {

int facet_with_normal(const HPolytope& k, const Vec& n, double tol = 1e-9) {
  for (int i = 0; i < k.num_facets(); ++i)
    if ((k.normal(i) - n).cwiseAbs().maxCoeff() <= tol) return i;
  return -1;
}

// Distance (l1) from d to the cone spanned by the columns of gens.
double cone_residual(const Mat& gens, const Vec& d) {
  const int dim = static_cast<int>(d.size());
  const int g = static_cast<int>(gens.cols());
  LinearProgram lp(g + 2 * dim);
  lp.objective.tail(2 * dim).setOnes();
  for (int r = 0; r < dim; ++r) {
    Vec row = Vec::Zero(g + 2 * dim);
    if (g > 0) row.head(g) = gens.row(r).transpose();
    row(g + r) = 1.0;
    row(g + dim + r) = -1.0;
    lp.add_eq(row, d(r));
  }
  const LpResult res = solve_lp(lp);
  if (!res.optimal()) return d.lpNorm<1>();
  return res.value;
}

std::vector<int> tight_facets(const HPolytope& k, const Vec& a, const Vec& b, double tol) {
  std::vector<int> out;
  for (int j = 0; j < k.num_facets(); ++j) {
    const double h = k.height(j);
    if (std::abs(a.dot(k.normal(j)) - h) <= tol && std::abs(b.dot(k.normal(j)) - h) <= tol) out.push_back(j);
  }
  return out;
}

double max_excess(const HPolytope& k, const Mat& pts) {
  const Mat lhs = pts * k.normals().transpose();
  double worst = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < lhs.rows(); ++i)
    worst = std::max(worst, (lhs.row(i).transpose() - k.heights()).maxCoeff());
  return worst;
}

Mat stack_rows(const std::vector<Vec>& pts, int dim) {
  Mat m(static_cast<Eigen::Index>(pts.size()), dim);
  for (std::size_t i = 0; i < pts.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = pts[i].transpose();
  return m;
}

bool parallel_unit(const Vec& a, const Vec& b, double tol) {
  return (a.normalized() - b.normalized()).norm() <= tol;
}

// Drops zero-length edges and merges consecutive edges on the same normal.
void simplify(std::vector<Vec>& pts, std::vector<int>& facets, std::vector<Vec>& normals,
              std::vector<double>& times, double tol) {
  bool changed = true;
  while (changed && pts.size() > 2) {
    changed = false;
    const std::size_t m = pts.size();
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t next = (i + 1) % m;
      if ((pts[next] - pts[i]).norm() <= tol) {
        // Edge i vanishes: remove its end vertex, keep edge data of the next.
        pts.erase(pts.begin() + static_cast<long>(next));
        facets.erase(facets.begin() + static_cast<long>(i));
        normals.erase(normals.begin() + static_cast<long>(i));
        times.erase(times.begin() + static_cast<long>(i));
        if (next == 0) std::rotate(pts.begin(), pts.end() - 1, pts.end());
        changed = true;
        break;
      }
      const std::size_t prev = (i + m - 1) % m;
      if ((normals[prev] - normals[i]).norm() <= tol) {
        // Vertex i is interior to one straight edge.
        times[prev] += times[i];
        pts.erase(pts.begin() + static_cast<long>(i));
        facets.erase(facets.begin() + static_cast<long>(i));
        normals.erase(normals.begin() + static_cast<long>(i));
        times.erase(times.begin() + static_cast<long>(i));
        changed = true;
        break;
      }
    }
  }
}

ClosedOrbit assemble(const std::vector<Vec>& pts, std::vector<int> facets, std::vector<Vec> normals,
                     std::vector<double> times, int dim, double tol) {
  std::vector<Vec> p = pts;
  simplify(p, facets, normals, times, tol);
  ClosedOrbit o;
  o.vertices = stack_rows(p, dim);
  o.facets = std::move(facets);
  o.normals = std::move(normals);
  o.times = std::move(times);
  o.action = polygon_action(o.vertices);
  return o;
}

}  // namespace

Vec ClosedOrbit::edge(int i) const {
  const int m = size();
  return vertex((i + 1) % m) - vertex(i);
}

double polygon_action(const Mat& vertices) {
  const Eigen::Index m = vertices.rows();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < m; ++i)
    acc += omega(Vec(vertices.row(i).transpose()), Vec(vertices.row((i + 1) % m).transpose()));
  return 0.5 * std::abs(acc);
}

double orbit_action(const ClosedOrbit& orbit, double tol) {
  if (orbit.size() == 0) return 0.0;
  if (!orbit.times.empty()) {
    if (orbit.times.size() != static_cast<std::size_t>(orbit.size()) || orbit.normals.size() != orbit.times.size())
      throw Error(ErrorKind::InvalidArgument, "orbit edge data does not match its vertices");
    Vec sum = Vec::Zero(orbit.vertices.cols());
    for (std::size_t i = 0; i < orbit.times.size(); ++i) sum += orbit.times[i] * j_apply(orbit.normals[i]);
    if (sum.norm() > tol) throw Error(ErrorKind::InvalidArgument, "orbit does not close");
  }
  return polygon_action(orbit.vertices);
}

LiftResult orbit_from_sequence(const HPolytope& k, const CapacitySequence& seq, double tol) {
  LiftResult out;
  const int d = k.dim();
  const FeasibilityReport rep = sequence_feasible(k, seq, tol);
  if (!rep.feasible) {
    out.reason = "sequence is not feasible: " + rep.message;
    return out;
  }
  const double q = sequence_action(k, seq);
  if (!(q > 0.0)) {
    out.reason = "sequence has nonpositive objective";
    return out;
  }
  const double c = 1.0 / (2.0 * q);
  const int m = static_cast<int>(seq.entries.size());

  std::vector<int> facets;
  std::vector<Vec> normals;
  std::vector<double> times;
  for (int i = m - 1; i >= 0; --i) {
    facets.push_back(seq.entries[i].facet);
    normals.push_back(k.normal(seq.entries[i].facet));
    times.push_back(2.0 * c * seq.entries[i].beta);
  }
  std::vector<Vec> offsets(m, Vec::Zero(d));
  for (int i = 1; i < m; ++i) offsets[i] = offsets[i - 1] + times[i - 1] * j_apply(normals[i - 1]);

  Mat a(m, d);
  Vec b(m);
  for (int i = 0; i < m; ++i) {
    a.row(i) = normals[i].transpose();
    b(i) = k.height(facets[i]) - offsets[i].dot(normals[i]);
  }
  Vec x = a.completeOrthogonalDecomposition().solve(b);
  out.incidence_residual = (a * x - b).cwiseAbs().maxCoeff();
  if (out.incidence_residual > tol) {
    out.reason = "sequence does not lift to a boundary orbit (incidence residual)";
    return out;
  }
  auto points = [&](const Vec& start) {
    std::vector<Vec> pts;
    for (int i = 0; i < m; ++i) pts.push_back(start + offsets[i]);
    return pts;
  };
  out.containment_excess = std::max(0.0, max_excess(k, stack_rows(points(x), d)));
  if (out.containment_excess > tol) {
    // The incidences may leave freedom; look for a start that keeps every vertex in K.
    LinearProgram lp(d);
    std::fill(lp.free_var.begin(), lp.free_var.end(), true);
    for (int i = 0; i < m; ++i) lp.add_eq(a.row(i).transpose(), b(i));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < k.num_facets(); ++j) lp.add_le(k.normal(j), k.height(j) - offsets[i].dot(k.normal(j)));
    const LpResult res = solve_lp(lp);
    if (res.optimal()) {
      x = res.x;
      out.containment_excess = std::max(0.0, max_excess(k, stack_rows(points(x), d)));
      out.incidence_residual = (a * x - b).cwiseAbs().maxCoeff();
    }
    if (out.containment_excess > tol || out.incidence_residual > tol) {
      out.reason = "sequence does not lift to a boundary orbit (leaves the body)";
      return out;
    }
  }
  ClosedOrbit orbit;
  orbit.vertices = stack_rows(points(x), d);
  orbit.facets = std::move(facets);
  orbit.normals = std::move(normals);
  orbit.times = std::move(times);
  orbit.action = orbit_action(orbit, tol);
  out.action_residual = std::abs(orbit.action - c);
  if (out.action_residual > tol * std::max(1.0, c)) {
    out.reason = "lifted polygon action differs from 1/(2Q)";
    return out;
  }
  out.orbit = std::move(orbit);
  out.ok = true;
  return out;
}

OrbitCheck verify_orbit(const HPolytope& k, const ClosedOrbit& o, double tol, double cone_tol) {
  OrbitCheck chk;
  const int m = o.size();
  if (m < 2 || o.normals.size() != static_cast<std::size_t>(m) || o.times.size() != static_cast<std::size_t>(m)) {
    chk.reason = "orbit needs at least two edges with normals and times";
    return chk;
  }
  for (int i = 0; i < m; ++i)
    chk.closure = std::max(chk.closure, (o.edge(i) - o.times[i] * j_apply(o.normals[i])).cwiseAbs().maxCoeff());
  chk.containment = std::max(0.0, max_excess(k, o.vertices));
  for (int i = 0; i < m; ++i) {
    const int f = facet_with_normal(k, o.normals[i]);
    if (f < 0) {
      chk.reason = "edge " + std::to_string(i) + " runs along no facet of the body";
      return chk;
    }
    const Vec p = o.vertex(i), q = o.vertex((i + 1) % m);
    chk.incidence = std::max({chk.incidence, std::abs(p.dot(k.normal(f)) - k.height(f)),
                              std::abs(q.dot(k.normal(f)) - k.height(f))});
    const Vec e = q - p;
    if (e.norm() <= tol) continue;
    const std::vector<int> act = tight_facets(k, p, q, tol);
    Mat gens(k.dim(), static_cast<Eigen::Index>(act.size()));
    for (std::size_t c = 0; c < act.size(); ++c) gens.col(static_cast<Eigen::Index>(c)) = k.normal(act[c]);
    chk.cone = std::max(chk.cone, cone_residual(gens, -j_apply(e).normalized()));
  }
  std::ostringstream why;
  if (chk.closure > tol) why << "edges do not match J-normal directions; ";
  if (chk.incidence > tol) why << "edge leaves its facet; ";
  if (chk.containment > tol) why << "vertex outside the body; ";
  if (chk.cone > cone_tol) why << "velocity outside J times the normal cone; ";
  chk.reason = why.str();
  chk.ok = chk.reason.empty();
  return chk;
}

SplitResult split_orbit(const HPolytope& k, const ClosedOrbit& o, const CutSpec& spec_in, double tol) {
  SplitResult out;
  const CutPieces pieces = cut(k, spec_in);
  const Vec v = pieces.spec.normal;
  const double level = pieces.spec.level;
  const Vec jv = j_apply(v);
  const int m = o.size();
  const int d = k.dim();

  // Extended polygon: original vertices plus transversal crossing points.
  struct Node {
    Vec p;
    int sign;
    int edge;      // original edge leaving this node
    double share;  // fraction of that edge remaining from here
  };
  std::vector<Node> nodes;
  auto sgn = [&](const Vec& p) {
    const double f = p.dot(v) - level;
    return f > tol ? 1 : (f < -tol ? -1 : 0);
  };
  for (int i = 0; i < m; ++i) {
    const Vec p = o.vertex(i), q = o.vertex((i + 1) % m);
    const int sp = sgn(p), sq = sgn(q);
    nodes.push_back({p, sp, i, 1.0});
    if (sp * sq < 0) {
      const double fp = p.dot(v) - level, fq = q.dot(v) - level;
      const double lam = fp / (fp - fq);
      nodes.push_back({p + lam * (q - p), 0, i, 1.0 - lam});
    }
  }
  const int n = static_cast<int>(nodes.size());
  std::vector<int> nonzero;
  for (int i = 0; i < n; ++i)
    if (nodes[i].sign != 0) nonzero.push_back(i);
  int changes = 0;
  for (std::size_t i = 0; i < nonzero.size(); ++i)
    if (nodes[nonzero[i]].sign != nodes[nonzero[(i + 1) % nonzero.size()]].sign) ++changes;
  out.crossings = changes;
  if (changes != 2) {
    out.reason = changes == 0 ? "orbit does not cross the cut hyperplane transversally"
                              : "orbit crosses the cut hyperplane " + std::to_string(changes) + " times";
    return out;
  }
  // Start of the positive run and the zero nodes bounding it.
  int start = -1;
  for (int i = 0; i < n && start < 0; ++i) {
    if (nodes[i].sign != 1) continue;
    int j = (i + n - 1) % n;
    while (nodes[j].sign == 0) j = (j + n - 1) % n;
    if (nodes[j].sign == -1) start = i;
  }
  int entry = (start + n - 1) % n;  // last zero node before the positive run
  // The positive side may touch the plane before it ends; exit after its last positive node.
  int neg = start;
  while (nodes[neg].sign != -1) neg = (neg + 1) % n;
  int exit = (neg + n - 1) % n;
  while (nodes[(exit + n - 1) % n].sign == 0) exit = (exit + n - 1) % n;
  if (nodes[entry].sign != 0) {
    out.reason = "orbit crosses the cut hyperplane at a vertex off the plane";
    return out;
  }
  const Vec x1 = nodes[entry].p, x2 = nodes[exit].p;
  const Vec chord = x2 - x1;
  const double along = chord.dot(jv);
  if (!(along > tol) || (chord - along * jv).norm() > tol * std::max(1.0, chord.norm())) {
    out.reason = "chord between crossings is not a positive multiple of J v: this minimizer does not witness additivity at this cut";
    return out;
  }

  auto piece_label = [](const std::vector<int>& origin, int f) {
    for (std::size_t j = 0; j < origin.size(); ++j)
      if (origin[j] == f) return static_cast<int>(j);
    return -1;
  };
  // Walk from node a to node b collecting vertices and edge data.
  auto walk = [&](int a, int b, const std::vector<int>& origin, std::vector<Vec>& pts, std::vector<int>& fs,
                  std::vector<Vec>& ns, std::vector<double>& ts) {
    for (int i = a; i != b; i = (i + 1) % n) {
      const Node& cur = nodes[i];
      const Node& nxt = nodes[(i + 1) % n];
      pts.push_back(cur.p);
      const int e = cur.edge;
      const double frac = cur.share - (nxt.edge == e ? nxt.share : 0.0);
      fs.push_back(piece_label(origin, o.facets.empty() ? -1 : o.facets[e]));
      ns.push_back(o.normals[e]);
      ts.push_back(o.times[e] * frac);
    }
  };
  {
    std::vector<Vec> pts;
    std::vector<int> fs;
    std::vector<Vec> ns;
    std::vector<double> ts;
    walk(entry, exit, pieces.origin1, pts, fs, ns, ts);
    pts.push_back(x2);
    fs.push_back(pieces.cut_facet1);
    ns.push_back(-v);
    ts.push_back(along);
    out.orbit1 = assemble(pts, fs, ns, ts, d, tol);
  }
  {
    std::vector<Vec> pts;
    std::vector<int> fs;
    std::vector<Vec> ns;
    std::vector<double> ts;
    walk(exit, entry, pieces.origin2, pts, fs, ns, ts);
    pts.push_back(x1);
    fs.push_back(pieces.cut_facet2);
    ns.push_back(v);
    ts.push_back(along);
    out.orbit2 = assemble(pts, fs, ns, ts, d, tol);
  }
  const OrbitCheck c1 = verify_orbit(pieces.k1, out.orbit1, tol);
  const OrbitCheck c2 = verify_orbit(pieces.k2, out.orbit2, tol);
  if (!c1.ok || !c2.ok) {
    out.reason = "split pieces are not characteristics of the cut bodies: " + c1.reason + c2.reason;
    return out;
  }
  out.ok = true;
  return out;
}

ClosedOrbit glue_orbits(const ClosedOrbit& o1, const ClosedOrbit& o2, const Vec& v_in, const HPolytope* body,
                        double tol) {
  const Vec v = v_in.normalized();
  const Vec jv = j_apply(v);
  auto find_segment = [&](const ClosedOrbit& o, const Vec& dir) {
    int found = -1, count = 0;
    for (int i = 0; i < o.size(); ++i) {
      const Vec e = o.edge(i);
      if (e.norm() > tol && parallel_unit(e, dir, 1e-7)) {
        found = i;
        ++count;
      }
    }
    if (count != 1)
      throw Error(ErrorKind::InvalidArgument,
                  "orbit must carry exactly one cut segment, found " + std::to_string(count));
    return found;
  };
  const int a = find_segment(o1, -jv);
  const int b = find_segment(o2, jv);
  const double l1 = o1.edge(a).norm(), l2 = o2.edge(b).norm();
  if (std::abs(l1 - l2) > tol * std::max(1.0, l1))
    throw Error(ErrorKind::InvalidArgument, "cut segments have different lengths");
  const int m1 = o1.size(), m2 = o2.size();
  const Vec shift = o1.vertex((a + 1) % m1) - o2.vertex(b);

  std::vector<Vec> pts;
  std::vector<int> fs;
  std::vector<Vec> ns;
  std::vector<double> ts;
  auto edge_time = [](const ClosedOrbit& o, int i) {
    return o.times.empty() ? o.edge(i).norm() : o.times[i];
  };
  for (int s = 1; s < m1; ++s) {
    const int i = (a + s) % m1;
    pts.push_back(o1.vertex(i));
    ns.push_back(o1.normals[i]);
    ts.push_back(edge_time(o1, i));
  }
  for (int s = 1; s < m2; ++s) {
    const int i = (b + s) % m2;
    pts.push_back(o2.vertex(i) + shift);
    ns.push_back(o2.normals[i]);
    ts.push_back(edge_time(o2, i));
  }
  // The translated far end of the o2 cut segment lands on the start of the o1 one.
  if ((o2.vertex((b + 1) % m2) + shift - o1.vertex(a)).norm() > tol * std::max(1.0, l1))
    throw Error(ErrorKind::InvalidArgument, "cut segments do not coincide after translation");
  for (const Vec& n : ns) fs.push_back(body ? facet_with_normal(*body, n) : -1);
  return assemble(pts, fs, ns, ts, static_cast<int>(v.size()), tol);
}

namespace {

// Vertices where the loop actually turns.
std::vector<Vec> corners(const ClosedOrbit& o, double tol) {
  std::vector<Vec> pts;
  for (int i = 0; i < o.size(); ++i)
    if (pts.empty() || (o.vertex(i) - pts.back()).norm() > tol) pts.push_back(o.vertex(i));
  while (pts.size() > 1 && (pts.front() - pts.back()).norm() <= tol) pts.pop_back();
  bool changed = true;
  while (changed && pts.size() > 2) {
    changed = false;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const Vec& prev = pts[(i + pts.size() - 1) % pts.size()];
      const Vec& next = pts[(i + 1) % pts.size()];
      const Vec a = pts[i] - prev, b = next - pts[i];
      if (a.dot(b) > 0.0 && (a.normalized() - b.normalized()).norm() <= tol) {
        pts.erase(pts.begin() + static_cast<long>(i));
        changed = true;
        break;
      }
    }
  }
  return pts;
}

}  // namespace

bool same_cycle(const ClosedOrbit& a, const ClosedOrbit& b, double tol) {
  if (a.vertices.cols() != b.vertices.cols()) return false;
  const std::vector<Vec> x = corners(a, tol), y = corners(b, tol);
  const std::size_t m = x.size();
  if (m != y.size()) return false;
  for (std::size_t s = 0; s < m; ++s) {
    bool ok = true;
    for (std::size_t i = 0; i < m && ok; ++i) ok = (x[i] - y[(i + s) % m]).cwiseAbs().maxCoeff() <= tol;
    if (ok) return true;
  }
  return false;
}

std::string_view to_string(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::ExtremeRay: return "extreme-ray";
    case EdgeKind::CoisotropicFace: return "coisotropic-face";
    case EdgeKind::IsotropicAmbiguous: return "isotropic-ambiguous";
  }
  return "?";
}

std::vector<EdgeLabel> classify_orbit_edges(const HPolytope& k, const ClosedOrbit& o, double tol) {
  const VPolytope verts = vertices(k);
  const int dim = k.dim();
  std::vector<EdgeLabel> labels;
  for (int i = 0; i < o.size(); ++i) {
    const Vec p = o.vertex(i), q = o.vertex((i + 1) % o.size());
    const Vec e = q - p;
    EdgeLabel lab;
    std::vector<int> act = tight_facets(k, p, q, tol);
    if (act.empty() || e.norm() <= tol) throw Error(ErrorKind::InvalidArgument, "edge " + std::to_string(i) + " is not on the boundary");
    // Smallest face: vertices tight on every active facet, then every facet tight on them.
    std::vector<int> fv;
    for (int j = 0; j < verts.num_vertices(); ++j) {
      bool on = true;
      for (int f : act) on = on && std::abs(verts.vertex(j).dot(k.normal(f)) - k.height(f)) <= 1e-7;
      if (on) fv.push_back(j);
    }
    if (!fv.empty()) {
      act.clear();
      for (int f = 0; f < k.num_facets(); ++f) {
        bool on = true;
        for (int j : fv) on = on && std::abs(verts.vertex(j).dot(k.normal(f)) - k.height(f)) <= 1e-7;
        if (on) act.push_back(f);
      }
    }
    lab.active = act;
    Mat diffs(dim, std::max<Eigen::Index>(1, static_cast<Eigen::Index>(fv.size()) - 1));
    diffs.setZero();
    for (std::size_t j = 1; j < fv.size(); ++j)
      diffs.col(static_cast<Eigen::Index>(j - 1)) = verts.vertex(fv[j]) - verts.vertex(fv[0]);
    Eigen::JacobiSVD<Mat> svd(diffs, Eigen::ComputeThinU);
    svd.setThreshold(1e-9);
    lab.face_dim = fv.size() > 1 ? static_cast<int>(svd.rank()) : 0;

    const Vec dirn = -j_apply(e).normalized();
    Mat gens(dim, static_cast<Eigen::Index>(act.size()));
    for (std::size_t c = 0; c < act.size(); ++c) gens.col(static_cast<Eigen::Index>(c)) = k.normal(act[c]);
    bool extreme = false;
    for (std::size_t c = 0; c < act.size() && !extreme; ++c) {
      if ((k.normal(act[c]) - dirn).norm() > 1e-7) continue;
      Mat others(dim, static_cast<Eigen::Index>(act.size()) - 1);
      for (std::size_t r = 0, col = 0; r < act.size(); ++r)
        if (r != c) others.col(static_cast<Eigen::Index>(col++)) = k.normal(act[r]);
      extreme = act.size() == 1 || cone_residual(others, dirn) > 1e-9;
    }
    if (extreme) {
      lab.kind = EdgeKind::ExtremeRay;
    } else {
      bool coiso = false;
      if (lab.face_dim > 0 && cone_residual(gens, dirn) <= 1e-9) {
        const Mat basis = svd.matrixU().leftCols(lab.face_dim);
        const SubspaceClass cls = classify_subspace(basis);
        coiso = cls == SubspaceClass::Coisotropic || cls == SubspaceClass::Lagrangian;
      }
      lab.kind = coiso ? EdgeKind::CoisotropicFace : EdgeKind::IsotropicAmbiguous;
    }
    labels.push_back(std::move(lab));
  }
  return labels;
}

}  // namespace ehz
