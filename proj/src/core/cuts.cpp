#include "cuts.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>

namespace ehz {

namespace {

Vec unit(const Vec& v) {
  const double len = v.norm();
  if (!(len > 1e-12)) throw Error(ErrorKind::InvalidArgument, "cut normal must be nonzero");
  return v / len;
}

int find_normal(const HPolytope& k, const Vec& n, double tol = 1e-9) {
  for (int i = 0; i < k.num_facets(); ++i)
    if ((k.normal(i) - n).cwiseAbs().maxCoeff() <= tol) return i;
  return -1;
}

// K intersected with {<x, w> <= height}; returns the pruned body, the origin
// map into K (-1 for the new facet) and the index of the new facet.
struct HalfCut {
  HPolytope body;
  std::vector<int> origin;
  int cut_facet;
};

HalfCut intersect_halfspace(const HPolytope& k, const Vec& w, double height) {
  const int m = k.num_facets();
  Mat normals = k.normals();
  Vec heights = k.heights();
  std::vector<int> origin(m);
  for (int i = 0; i < m; ++i) origin[i] = i;
  const int same = find_normal(k, w);
  if (same >= 0) {
    heights(same) = std::min(heights(same), height);
    origin[same] = -1;
  } else {
    normals.conservativeResize(m + 1, Eigen::NoChange);
    normals.row(m) = w.transpose();
    heights.conservativeResize(m + 1);
    heights(m) = height;
    origin.push_back(-1);
  }
  PrunedPolytope pruned = remove_redundant(HPolytope(normals, heights));
  HalfCut out{std::move(pruned.body), {}, -1};
  for (std::size_t i = 0; i < pruned.origin.size(); ++i) {
    const int o = origin[pruned.origin[i]];
    out.origin.push_back(o);
    if (o < 0) out.cut_facet = static_cast<int>(i);
  }
  if (out.cut_facet < 0) throw Error(ErrorKind::Internal, "cut facet vanished");
  return out;
}

double rel_gap(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

CapacityResult solve(const HPolytope& k, const SearchConfig& cfg) { return capacity_bnb(k, cfg); }

// Q restricted to entries [lo, hi).
double block_value(const HPolytope& k, const CapacitySequence& s, std::size_t lo, std::size_t hi) {
  return sequence_action(k, std::span<const SequenceEntry>(s.entries.data() + lo, hi - lo));
}

// One convex piece of a maximizer set: the segment between two coefficient
// vectors on a fixed facet order (a point when both ends coincide).
struct Segment {
  std::vector<int> order;
  Vec a, b;
};

std::vector<Segment> maximizer_segments(const CapacityResult& r) {
  std::vector<Segment> out;
  for (const CapacitySequence& s : r.maximizers) {
    Segment g;
    Vec beta(static_cast<Eigen::Index>(s.entries.size()));
    for (std::size_t i = 0; i < s.entries.size(); ++i) {
      g.order.push_back(s.entries[i].facet);
      beta(static_cast<Eigen::Index>(i)) = s.entries[i].beta;
    }
    g.a = g.b = beta;
    out.push_back(std::move(g));
  }
  for (const MaximizerFamily& f : r.families) {
    std::vector<Vec> pts = f.sample_coefficients;
    Vec mid(static_cast<Eigen::Index>(f.order.size()));
    for (std::size_t i = 0; i < f.order.size(); ++i) mid(static_cast<Eigen::Index>(i)) = f.interior.entries[i].beta;
    pts.push_back(mid);
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j) out.push_back({f.order, pts[i], pts[j]});
  }
  return out;
}

CapacitySequence at(const Segment& g, double lambda) {
  CapacitySequence s;
  const Vec beta = (1.0 - lambda) * g.a + lambda * g.b;
  for (std::size_t i = 0; i < g.order.size(); ++i)
    if (beta(static_cast<Eigen::Index>(i)) > 1e-14) s.entries.push_back({g.order[i], beta(static_cast<Eigen::Index>(i))});
  return s;
}

std::vector<double> roots_in_unit(double a, double b, double c) {
  // a x^2 + b x + c = 0 on [0, 1]
  std::vector<double> r;
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c), 1e-300});
  if (std::abs(a) <= 1e-14 * scale) {
    if (std::abs(b) > 1e-14 * scale) r.push_back(-c / b);
  } else {
    const double disc = b * b - 4 * a * c;
    if (disc >= -1e-14 * scale * scale) {
      const double sq = std::sqrt(std::max(disc, 0.0));
      r.push_back((-b - sq) / (2 * a));
      r.push_back((-b + sq) / (2 * a));
    }
  }
  std::vector<double> out;
  for (double x : r)
    if (x >= -1e-9 && x <= 1 + 1e-9) out.push_back(std::clamp(x, 0.0, 1.0));
  return out;
}

}  // namespace

CutSpec cut_at_depth(const HPolytope& k, const Vec& v, double depth) {
  if (v.size() != k.dim()) throw Error(ErrorKind::DimensionMismatch, "cut normal dimension");
  const Vec u = unit(v);
  return {u, support(k, u) - depth};
}

double cut_depth(const HPolytope& k, const CutSpec& spec) {
  return support(k, unit(spec.normal)) - spec.level;
}

CutPieces cut(const HPolytope& k, const CutSpec& spec_in) {
  if (spec_in.normal.size() != k.dim()) throw Error(ErrorKind::DimensionMismatch, "cut normal dimension");
  CutSpec spec{unit(spec_in.normal), spec_in.level};
  const double hi = support(k, spec.normal);
  const double lo = -support(k, -spec.normal);
  const double margin = 1e-9 * std::max(1.0, hi - lo);
  if (!(spec.level > lo + margin && spec.level < hi - margin)) {
    std::ostringstream msg;
    msg << "cut level " << spec.level << " outside the open interval (" << lo << ", " << hi << ")";
    throw Error(ErrorKind::InvalidArgument, msg.str());
  }
  HalfCut a = intersect_halfspace(k, -spec.normal, -spec.level);
  HalfCut b = intersect_halfspace(k, spec.normal, spec.level);
  return {std::move(a.body), std::move(b.body), std::move(a.origin), std::move(b.origin),
          a.cut_facet, b.cut_facet, spec};
}

DefectReport additivity_defect(const HPolytope& k, const CutSpec& spec, const SearchConfig& cfg,
                               const CapacityResult* whole) {
  const CutPieces pieces = cut(k, spec);
  DefectReport rep;
  CapacityResult full;
  if (!whole) {
    full = solve(k, cfg);
    whole = &full;
  }
  const CapacityResult r1 = solve(pieces.k1, cfg);
  const CapacityResult r2 = solve(pieces.k2, cfg);
  rep.capacity = whole->capacity;
  rep.c1 = r1.capacity;
  rep.c2 = r2.capacity;
  rep.raw_defect = rep.c1 + rep.c2 - rep.capacity;
  rep.defect = (rep.raw_defect < 0.0 && rep.raw_defect > -1e-8 * std::max(1.0, rep.capacity))
                   ? 0.0
                   : rep.raw_defect;
  rep.certified = whole->certified && r1.certified && r2.certified;
  return rep;
}

std::vector<SweepRow> sweep(const HPolytope& k, const Vec& v, const std::vector<double>& depths,
                            const SearchConfig& cfg) {
  const CapacityResult whole = solve(k, cfg);
  std::vector<SweepRow> rows;
  for (double t : depths) {
    SweepRow row;
    row.depth = t;
    row.capacity = whole.capacity;
    try {
      const DefectReport d = additivity_defect(k, cut_at_depth(k, v, t), cfg, &whole);
      row.c1 = d.c1;
      row.c2 = d.c2;
      row.sum = d.c1 + d.c2;
      row.defect = d.defect;
      row.ok = true;
    } catch (const Error& e) {
      row.error = e.what();
      row.c1 = row.c2 = row.sum = row.defect = std::numeric_limits<double>::quiet_NaN();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "t,c1,c2,sum,cK,defect\n";
  char buf[256];
  auto num = [&](double x) -> std::string {
    if (std::isnan(x)) return "nan";
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
  };
  for (const SweepRow& r : rows)
    out += num(r.depth) + "," + num(r.c1) + "," + num(r.c2) + "," + num(r.sum) + "," +
           num(r.capacity) + "," + num(r.defect) + "\n";
  return out;
}

std::optional<CombinatorialCut> verify_combinatorial_cut(const HPolytope& k, const CutSpec& spec_in,
                                                         double capacity, double optimal_value,
                                                         const CapacitySequence& seq, int split) {
  const int len = static_cast<int>(seq.entries.size());
  if (split <= 1 || split >= len) return std::nullopt;
  const CutSpec spec{unit(spec_in.normal), spec_in.level};
  if (!sequence_feasible(k, seq).feasible) return std::nullopt;
  const double value = sequence_action(k, seq);
  if (rel_gap(value, optimal_value) > 1e-9) return std::nullopt;

  // Prefix normals must be facet normals of K1 other than the cut facet.
  const CutPieces pieces = cut(k, spec);
  Vec prefix = Vec::Zero(k.dim());
  double h = 0.0;
  for (int i = 0; i < split; ++i) {
    const SequenceEntry& e = seq.entries[i];
    const int j = find_normal(pieces.k1, k.normal(e.facet));
    if (j < 0 || j == pieces.cut_facet1) return std::nullopt;
    prefix += e.beta * k.normal(e.facet);
    h += e.beta * k.height(e.facet);
  }
  const double c = prefix.dot(spec.normal);
  if (!(c > 1e-12)) return std::nullopt;
  if ((prefix - c * spec.normal).norm() > 1e-9 * std::max(1.0, prefix.norm())) return std::nullopt;

  CombinatorialCut out;
  out.sequence = seq;
  out.sequence.value = value;
  out.split = split;
  out.coefficient = c;
  out.a1 = block_value(k, seq, 0, static_cast<std::size_t>(split));
  out.a2 = block_value(k, seq, static_cast<std::size_t>(split), seq.entries.size());
  // H1 = H - c (h_K(v) - t) must equal 2 c_EHZ(K) A1.
  out.h1 = h - c * spec.level;
  out.h2 = 1.0 - out.h1;
  if (!(out.h1 > 0.0 && out.h2 > 0.0)) return std::nullopt;
  if (std::abs(spec.level) > 1e-12) {
    const double c_eq = (h - 2.0 * capacity * out.a1) / spec.level;
    out.match_residual = std::abs(c - c_eq) / c;
  } else {
    out.match_residual = std::abs(out.h1 - 2.0 * capacity * out.a1) / std::max(out.h1, 1e-300);
  }
  if (out.match_residual > 1e-7) return std::nullopt;
  return out;
}

CombinatorialCutSearch find_combinatorial_cut(const HPolytope& k, const Vec& v, double depth,
                                              const SearchConfig& cfg, bool all) {
  CombinatorialCutSearch res;
  const CutSpec spec = cut_at_depth(k, v, depth);
  const CutPieces pieces = cut(k, spec);
  res.whole = solve(k, cfg);
  const double cap = res.whole.capacity;
  const double opt = res.whole.optimal_value;
  const PairingTable pairing(k);
  std::set<std::vector<std::pair<int, double>>> seen;

  auto record = [&](const CombinatorialCut& cc) {
    std::vector<std::pair<int, double>> key;
    for (const SequenceEntry& e : cc.sequence.entries) key.emplace_back(e.facet, std::round(e.beta * 1e9) / 1e9);
    key.emplace_back(-1, cc.split);
    if (seen.insert(key).second) res.cuts.push_back(cc);
  };
  auto done = [&] { return !all && !res.cuts.empty(); };

  // Route 1: prefixes of the maximizers of K, through rotations and swaps.
  for (const Segment& g : maximizer_segments(res.whole)) {
    if (done()) break;
    const CapacitySequence mid = at(g, 0.5);
    if (mid.entries.size() != g.order.size()) continue;
    for (const CapacitySequence& member : equivalent_sequences(pairing, mid, 5000)) {
      if (done()) break;
      // Positions of the member's facets in the segment order.
      // Positions of the member's entries in the segment order; repeated
      // facets are told apart by their midpoint coefficient.
      std::vector<int> perm;
      std::vector<bool> used(g.order.size(), false);
      for (const SequenceEntry& e : member.entries) {
        int best = -1;
        for (std::size_t i = 0; i < g.order.size(); ++i) {
          if (used[i] || g.order[i] != e.facet) continue;
          const double d = std::abs(mid.entries[i].beta - e.beta);
          if (best < 0 || d < std::abs(mid.entries[best].beta - e.beta)) best = static_cast<int>(i);
        }
        if (best < 0) break;
        used[best] = true;
        perm.push_back(best);
      }
      if (perm.size() != g.order.size()) continue;
      Segment h{{}, Vec(g.a.size()), Vec(g.b.size())};
      for (std::size_t i = 0; i < perm.size(); ++i) {
        h.order.push_back(g.order[perm[i]]);
        h.a(static_cast<Eigen::Index>(i)) = g.a(perm[i]);
        h.b(static_cast<Eigen::Index>(i)) = g.b(perm[i]);
      }
      const int len = static_cast<int>(h.order.size());
      for (int m = 2; m < len && !done(); ++m) {
        // Along the segment, prefix sum and H are affine, A1 quadratic.
        Vec p0 = Vec::Zero(k.dim()), p1 = Vec::Zero(k.dim());
        for (int i = 0; i < m; ++i) {
          p0 += h.a(i) * k.normal(h.order[i]);
          p1 += h.b(i) * k.normal(h.order[i]);
        }
        std::vector<double> lambdas;
        const Vec r0 = p0 - p0.dot(spec.normal) * spec.normal;
        const Vec r1 = p1 - p1.dot(spec.normal) * spec.normal;
        const Vec dr = r1 - r0;
        const bool point = (h.a - h.b).cwiseAbs().maxCoeff() < 1e-14;
        if (point || (r0.norm() < 1e-9 && r1.norm() < 1e-9)) {
          if (point) {
            lambdas.push_back(0.0);
          } else {
            // Match equation g(l) = H(l) - c(l) level - 2 cap A1(l) = 0.
            auto gfun = [&](double l) {
              double hh = 0.0, a1 = 0.0, cc = 0.0;
              CapacitySequence pre;
              for (int i = 0; i < m; ++i) {
                const double b = (1 - l) * h.a(i) + l * h.b(i);
                pre.entries.push_back({h.order[i], b});
                hh += b * k.height(h.order[i]);
                cc += b * k.normal(h.order[i]).dot(spec.normal);
              }
              a1 = sequence_action(k, pre);
              return hh - cc * spec.level - 2.0 * cap * a1;
            };
            const double g0 = gfun(0.0), gh = gfun(0.5), g1 = gfun(1.0);
            // Quadratic through three points.
            const double qa = 2.0 * (g0 - 2.0 * gh + g1);
            const double qb = g1 - g0 - qa;
            lambdas = roots_in_unit(qa, qb, g0);
          }
        } else if (dr.squaredNorm() > 1e-24) {
          lambdas.push_back(-r0.dot(dr) / dr.squaredNorm());
        }
        for (double l : lambdas) {
          if (l < -1e-9 || l > 1 + 1e-9) continue;
          l = std::clamp(l, 0.0, 1.0);
          CapacitySequence s;
          int split = 0;
          for (int i = 0; i < len; ++i) {
            const double b = (1 - l) * h.a(i) + l * h.b(i);
            if (b <= 1e-14) continue;
            s.entries.push_back({h.order[i], b});
            if (i < m) ++split;
          }
          if (auto cc = verify_combinatorial_cut(k, spec, cap, opt, s, split)) {
            cc->route = "maximizer";
            record(*cc);
          }
        }
      }
    }
  }
  if (done()) return res;

  // Route 2: glue maximizers of the pieces whose cut segments match.
  const CapacityResult r1 = solve(pieces.k1, cfg);
  const CapacityResult r2 = solve(pieces.k2, cfg);
  res.defect.capacity = cap;
  res.defect.c1 = r1.capacity;
  res.defect.c2 = r2.capacity;
  res.defect.raw_defect = r1.capacity + r2.capacity - cap;
  res.defect.defect = (res.defect.raw_defect < 0 && res.defect.raw_defect > -1e-8 * std::max(1.0, cap))
                          ? 0.0 : res.defect.raw_defect;
  res.defect.certified = res.whole.certified && r1.certified && r2.certified;

  auto coefficient_of = [](const Segment& g, int facet, double l) {
    for (std::size_t i = 0; i < g.order.size(); ++i)
      if (g.order[i] == facet) return (1 - l) * g.a(static_cast<Eigen::Index>(i)) + l * g.b(static_cast<Eigen::Index>(i));
    return 0.0;
  };
  const std::vector<Segment> s1 = maximizer_segments(r1), s2 = maximizer_segments(r2);
  for (const Segment& g1 : s1) {
    if (done()) break;
    const double a1 = coefficient_of(g1, pieces.cut_facet1, 0), b1 = coefficient_of(g1, pieces.cut_facet1, 1);
    if (std::max(a1, b1) <= 0) continue;
    for (const Segment& g2 : s2) {
      if (done()) break;
      const double a2 = coefficient_of(g2, pieces.cut_facet2, 0), b2 = coefficient_of(g2, pieces.cut_facet2, 1);
      if (std::max(a2, b2) <= 0) continue;
      // Cut segment lengths c1 gamma1 and c2 gamma2 must agree.
      const double lo1 = r1.capacity * std::min(a1, b1), hi1 = r1.capacity * std::max(a1, b1);
      const double lo2 = r2.capacity * std::min(a2, b2), hi2 = r2.capacity * std::max(a2, b2);
      const double lo = std::max(lo1, lo2), hi = std::min(hi1, hi2);
      if (lo > hi + 1e-9 * std::max(hi1, hi2)) continue;
      const double target = 0.5 * (lo + std::min(hi, std::max(lo, hi)));
      auto solve_lambda = [](double a, double b, double goal) {
        return std::abs(b - a) < 1e-15 ? 0.0 : std::clamp((goal - a) / (b - a), 0.0, 1.0);
      };
      const double l1 = solve_lambda(r1.capacity * a1, r1.capacity * b1, target);
      const double l2 = solve_lambda(r2.capacity * a2, r2.capacity * b2, target);
      CapacitySequence q1 = at(g1, l1), q2 = at(g2, l2);
      // Rotate the cut facet to the end of q1 and the front of q2.
      auto pos1 = std::find_if(q1.entries.begin(), q1.entries.end(),
                               [&](const SequenceEntry& e) { return e.facet == pieces.cut_facet1; });
      auto pos2 = std::find_if(q2.entries.begin(), q2.entries.end(),
                               [&](const SequenceEntry& e) { return e.facet == pieces.cut_facet2; });
      if (pos1 == q1.entries.end() || pos2 == q2.entries.end()) continue;
      std::rotate(q1.entries.begin(), pos1 + 1, q1.entries.end());
      std::rotate(q2.entries.begin(), pos2, q2.entries.end());
      const double gamma1 = q1.entries.back().beta, gamma2 = q2.entries.front().beta;
      const double w1 = gamma2 / (gamma1 + gamma2), w2 = 1.0 - w1;
      CapacitySequence glued;
      for (std::size_t i = 0; i + 1 < q1.entries.size(); ++i)
        glued.entries.push_back({pieces.origin1[q1.entries[i].facet], w1 * q1.entries[i].beta});
      const int split = static_cast<int>(glued.entries.size());
      for (std::size_t i = 1; i < q2.entries.size(); ++i)
        glued.entries.push_back({pieces.origin2[q2.entries[i].facet], w2 * q2.entries[i].beta});
      if (std::any_of(glued.entries.begin(), glued.entries.end(), [](const SequenceEntry& e) { return e.facet < 0; }))
        continue;
      if (auto cc = verify_combinatorial_cut(k, spec, cap, opt, glued, split)) {
        cc->route = "pieces";
        record(*cc);
      }
    }
  }
  return res;
}

PieceSequences induced_piece_sequences(const HPolytope& k, const CutSpec& spec_in,
                                       const CombinatorialCut& comb, const SearchConfig& cfg,
                                       double tol) {
  const CutSpec spec{unit(spec_in.normal), spec_in.level};
  const CutPieces pieces = cut(k, spec);
  PieceSequences out;
  const double c = comb.coefficient;
  const auto& e = comb.sequence.entries;
  for (int i = 0; i < comb.split; ++i) {
    const int j = find_normal(pieces.k1, k.normal(e[i].facet));
    if (j < 0) throw Error(ErrorKind::InvalidArgument, "prefix facet missing from the first piece");
    out.seq1.entries.push_back({j, e[i].beta / comb.h1});
  }
  out.seq1.entries.push_back({pieces.cut_facet1, c / comb.h1});
  out.seq2.entries.push_back({pieces.cut_facet2, c / comb.h2});
  for (std::size_t i = static_cast<std::size_t>(comb.split); i < e.size(); ++i) {
    const int j = find_normal(pieces.k2, k.normal(e[i].facet));
    if (j < 0) throw Error(ErrorKind::InvalidArgument, "suffix facet missing from the second piece");
    out.seq2.entries.push_back({j, e[i].beta / comb.h2});
  }
  out.seq1.value = sequence_action(pieces.k1, out.seq1);
  out.seq2.value = sequence_action(pieces.k2, out.seq2);
  out.feasible1 = sequence_feasible(pieces.k1, out.seq1, tol * 10);
  out.feasible2 = sequence_feasible(pieces.k2, out.seq2, tol * 10);

  const double a = comb.a1 + comb.a2;
  const double whole = solve(k, cfg).capacity;
  out.c1 = solve(pieces.k1, cfg).capacity;
  out.c2 = solve(pieces.k2, cfg).capacity;
  out.residual_sum = std::abs(comb.sequence.value - a);
  out.residual_h1 = std::abs(comb.h1 - comb.a1 / a);
  out.residual_c1 = std::abs(out.c1 - comb.a1 / (2 * a * a));
  out.residual_c2 = std::abs(out.c2 - comb.a2 / (2 * a * a));
  out.residual_total = std::abs(out.c1 + out.c2 - whole);
  const double scale = std::max(1.0, whole);
  out.ok = out.feasible1.feasible && out.feasible2.feasible && out.residual_sum <= tol * scale &&
           out.residual_h1 <= tol && out.residual_c1 <= tol * scale && out.residual_c2 <= tol * scale &&
           out.residual_total <= tol * scale;
  return out;
}

}  // namespace ehz
