// Acceptance run: one PASS/FAIL line per criterion, with the measured numbers.
// Exit status counts failing criteria. A failing clause listed with
// --expect-open is still printed as FAIL but does not count.

#include "body_library.hpp"
#include "orbit.hpp"
#include "property_support.hpp"

#include <CLI11.hpp>

#include <array>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace ehz;
using proptest::Rng;
using testutil::unit;
using testutil::vec;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string num(double x, int digits = 10) {
  std::ostringstream os;
  os << std::setprecision(digits) << x;
  return os.str();
}

struct Outcome {
  std::vector<std::string> notes;
  std::vector<std::pair<std::string, std::string>> failures;  // clause id, message

  void note(const std::string& s) { notes.push_back(s); }
  void require(bool ok, const std::string& clause, const std::string& what) {
    if (!ok) failures.emplace_back(clause, what);
  }
  bool pass() const { return failures.empty(); }
};

// ---------------------------------------------------------------------------
// Exact arithmetic in Q(sqrt2, sqrt3): a + b sqrt2 + c sqrt3 + d sqrt6.

struct Surd {
  std::array<Rational, 4> c{};

  Surd() = default;
  Surd(int x) { c[0] = x; }  // NOLINT: T{0} in the generic omega
  Surd(Rational a, Rational b, Rational s3, Rational s6) : c{a, b, s3, s6} {}
  static Surd rational(const Rational& a) { return Surd(a, 0, 0, 0); }

  Surd operator+(const Surd& o) const {
    Surd r;
    for (int i = 0; i < 4; ++i) r.c[i] = c[i] + o.c[i];
    return r;
  }
  Surd operator-(const Surd& o) const {
    Surd r;
    for (int i = 0; i < 4; ++i) r.c[i] = c[i] - o.c[i];
    return r;
  }
  Surd& operator+=(const Surd& o) { return *this = *this + o; }
  Surd operator*(const Surd& o) const {
    // basis products e_i e_j = k e_m over {1, sqrt2, sqrt3, sqrt6}
    static constexpr int idx[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
    static constexpr int mul[4][4] = {{1, 1, 1, 1}, {1, 2, 1, 2}, {1, 1, 3, 3}, {1, 2, 3, 6}};
    Surd r;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (c[i] != 0 && o.c[j] != 0) r.c[idx[i][j]] += mul[i][j] * c[i] * o.c[j];
    return r;
  }
  bool operator==(const Surd& o) const { return c == o.c; }
  bool is_rational() const { return c[1] == 0 && c[2] == 0 && c[3] == 0; }
  double value() const {
    return static_cast<double>(c[0]) + static_cast<double>(c[1]) * std::sqrt(2.0) +
           static_cast<double>(c[2]) * std::sqrt(3.0) + static_cast<double>(c[3]) * std::sqrt(6.0);
  }
};

using SurdVec = std::vector<Surd>;

Surd dot(const SurdVec& a, const SurdVec& b) {
  Surd s;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Surd exact_omega(const SurdVec& a, const SurdVec& b) {
  return omega<Surd>(std::span<const Surd>(a), std::span<const Surd>(b));
}

Vec to_vec(const SurdVec& a) {
  Vec v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) v(static_cast<Eigen::Index>(i)) = a[i].value();
  return v;
}

// Rotation used for the rotated cross-polytope, entry by entry.
std::array<SurdVec, 4> exact_rotation_rows() {
  const Rational z = 0;
  const Surd one = Surd::rational(1), zero;
  const Surd half_r2(z, Rational(1, 2), z, z);
  const Surd third_r3(z, z, Rational(1, 3), z);
  const Surd sixth_r6(z, z, z, Rational(1, 6));
  const Surd third_r6(z, z, z, Rational(1, 3));
  return {SurdVec{one, zero, zero, zero},
          SurdVec{zero, half_r2, zero, Surd() - half_r2},
          SurdVec{zero, third_r3, third_r3, third_r3},
          SurdVec{zero, sixth_r6, Surd() - third_r6, sixth_r6}};
}

SurdVec rotate_exact(const std::array<SurdVec, 4>& rows, const SurdVec& x) {
  SurdVec y;
  for (const SurdVec& r : rows) y.push_back(dot(r, x));
  return y;
}

// A polytope given by exact outer normals (any length) and exact vertices.
struct ExactPolytope {
  std::vector<SurdVec> normals;
  std::vector<Surd> heights;  // max over vertices, evaluated exactly
  Rational volume;            // derived independently
};

// Largest of <n, v> over the vertices, decided exactly; only rational
// values can be ordered here.
Surd exact_support(const SurdVec& n, const std::vector<SurdVec>& verts) {
  std::optional<Rational> best;
  for (const SurdVec& v : verts) {
    const Surd s = dot(n, v);
    if (!s.is_rational()) throw std::runtime_error("irrational support value");
    if (!best || s.c[0] > *best) best = s.c[0];
  }
  return Surd::rational(*best);
}

struct ExactCertificate {
  bool ok = false;
  std::string message;
  Rational q_squared;  // Q^2, rational for both bodies checked here
  Rational rho;        // systolic ratio of the upper bound 1/(2Q)
  double rho_value = 0.0;
};

// Re-expresses a floating sequence on `k` over the exact normals and checks
// closure, normalization and positivity exactly. Q is computed in the field.
ExactCertificate certify_exact(const HPolytope& k, const ExactPolytope& e, const CapacitySequence& seq) {
  ExactCertificate out;
  const int d = k.dim();
  SurdVec closing(static_cast<std::size_t>(d));
  Surd normalization;
  std::vector<std::pair<SurdVec, Rational>> terms;
  for (const SequenceEntry& entry : seq.entries) {
    int match = -1;
    double scale = 0.0;
    for (std::size_t i = 0; i < e.normals.size(); ++i) {
      const Vec n = to_vec(e.normals[i]);
      if ((n.normalized() - k.normal(entry.facet)).norm() < 1e-12 &&
          std::abs(e.heights[i].value() / n.norm() - k.height(entry.facet)) < 1e-12) {
        match = static_cast<int>(i);
        scale = n.norm();
      }
    }
    if (match < 0) {
      out.message = "facet " + std::to_string(entry.facet) + " has no exact counterpart";
      return out;
    }
    const Rational b = to_rational(entry.beta / scale, 10000);
    if (b <= 0 || std::abs(static_cast<double>(b) * scale - entry.beta) > 1e-12) {
      out.message = "coefficient " + num(entry.beta) + " is not a small rational multiple";
      return out;
    }
    const SurdVec& n = e.normals[static_cast<std::size_t>(match)];
    for (int j = 0; j < d; ++j) closing[static_cast<std::size_t>(j)] += Surd::rational(b) * n[static_cast<std::size_t>(j)];
    normalization += Surd::rational(b) * e.heights[static_cast<std::size_t>(match)];
    terms.emplace_back(n, b);
  }
  for (const Surd& s : closing)
    if (!(s == Surd())) {
      out.message = "closing sum is not exactly zero";
      return out;
    }
  if (!(normalization == Surd::rational(1))) {
    out.message = "normalization is not exactly one";
    return out;
  }
  Surd q;
  for (std::size_t i = 0; i < terms.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      q += Surd::rational(terms[i].second * terms[j].second) * exact_omega(terms[i].first, terms[j].first);
  const Surd q2 = q * q;
  if (!q2.is_rational() || q.value() <= 0) {
    out.message = "objective square is not rational";
    return out;
  }
  out.q_squared = q2.c[0];
  // c = 1/(2Q), c^2 = 1/(4 Q^2), rho = c^2 / (2 vol) in dimension four.
  out.rho = 1 / (4 * out.q_squared * 2 * e.volume);
  out.rho_value = static_cast<double>(out.rho);
  out.ok = true;
  return out;
}

ExactPolytope exact_24cell() {
  ExactPolytope e;
  std::vector<SurdVec> verts;
  for (int i = 0; i < 4; ++i)
    for (int s : {1, -1}) {
      SurdVec v(4);
      v[static_cast<std::size_t>(i)] = Surd(s);
      verts.push_back(v);
    }
  for (int s = 0; s < 16; ++s) {
    SurdVec v;
    for (int i = 0; i < 4; ++i) v.push_back(Surd::rational(Rational((s >> i) & 1 ? -1 : 1, 2)));
    verts.push_back(v);
  }
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      for (int si : {1, -1})
        for (int sj : {1, -1}) {
          SurdVec n(4);
          n[static_cast<std::size_t>(i)] = Surd(si);
          n[static_cast<std::size_t>(j)] = Surd(sj);
          e.normals.push_back(n);
          e.heights.push_back(exact_support(n, verts));
        }
  // Cube [-1/2,1/2]^4 plus eight pyramids of height 1/2 on its unit facets.
  e.volume = 1 + 8 * Rational(1, 2) / 4;
  return e;
}

ExactPolytope exact_rotated_cross() {
  ExactPolytope e;
  const auto rows = exact_rotation_rows();
  std::vector<SurdVec> verts;
  for (int i = 0; i < 4; ++i)
    for (int s : {1, -1}) {
      SurdVec x(4);
      x[static_cast<std::size_t>(i)] = Surd(s);
      verts.push_back(rotate_exact(rows, x));
    }
  for (int s = 0; s < 16; ++s) {
    SurdVec x;
    for (int i = 0; i < 4; ++i) x.push_back(Surd((s >> i) & 1 ? -1 : 1));
    const SurdVec n = rotate_exact(rows, x);  // the rotation is orthogonal, so A s is normal to A(facet)
    e.normals.push_back(n);
    e.heights.push_back(exact_support(n, verts));
  }
  e.volume = Rational(16, 24);  // 2^4 / 4!, preserved by an orthogonal map
  return e;
}

// ---------------------------------------------------------------------------

Outcome criterion_simplex() {
  Outcome o;
  const auto t0 = Clock::now();
  const HPolytope s = standard_simplex(4);
  const CapacityResult r = capacity_bnb(s);
  const double rho = systolic_ratio(r.capacity, volume(s), 2);
  const double secs = seconds_since(t0);
  o.note("rho=" + num(rho, 17) + " c=" + num(r.capacity, 17) + " t=" + num(secs, 3) + "s");
  o.require(r.certified, "certified", "search not certified");
  o.require(std::abs(rho - 0.75) <= 1e-9 * 0.75, "rho", "rho differs from 3/4");
  o.require(std::abs(r.capacity - 0.25) <= 1e-9, "capacity", "capacity differs from 1/4");
  o.require(secs < 1.0, "runtime", "runtime over 1 s");
  return o;
}

double diagonal_coefficient(const HPolytope& y, const CapacitySequence& s) {
  for (const SequenceEntry& e : s.entries)
    if (y.normal(e.facet).minCoeff() > 0.4) return e.beta;
  return 0.0;
}

Outcome criterion_y() {
  Outcome o;
  const auto t0 = Clock::now();
  const HPolytope y = body_y();
  const CapacityResult r = capacity_bruteforce(y);
  const double secs = seconds_since(t0);
  const double rho = systolic_ratio(r.capacity, volume(y), 2);
  bool low = false, high = false;
  int dim = 0;
  for (const MaximizerFamily& f : r.families) {
    dim = std::max(dim, f.dimension);
    for (const CapacitySequence& s : f.samples) {
      if (std::abs(sequence_action(y, s) - 2.0) > 1e-9) continue;
      const double b = diagonal_coefficient(y, s);
      low = low || std::abs(b) < 1e-9;
      high = high || std::abs(b - 2.0) < 1e-9;
    }
  }
  o.note("c=" + num(r.capacity, 17) + " A*=" + num(r.optimal_value, 17) + " rho=" + num(rho, 17) +
         " families=" + std::to_string(r.families.size()) + " (max dim " + std::to_string(dim) +
         ") t=" + num(secs, 3) + "s");
  o.require(r.certified, "certified", "search not certified");
  o.require(std::abs(r.capacity - 0.25) <= 1e-9, "capacity", "capacity differs from 1/4");
  o.require(std::abs(r.optimal_value - 2.0) <= 1e-9, "value", "A* differs from 2");
  o.require(low && high, "family", "family samples at diagonal coefficient 0 and 2 not both present");
  o.require(std::abs(rho - 1.0) <= 1e-8, "rho", "rho differs from 1");
  o.require(secs < 60.0, "runtime", "runtime over 60 s");
  return o;
}

Outcome criterion_pentagon_product() {
  Outcome o;
  const auto t0 = Clock::now();
  const HPolytope k = pentagon_product();
  const CapacityResult r = capacity_bnb(k);
  const double secs = seconds_since(t0);
  const double rho = systolic_ratio(r.capacity, volume(k), 2);
  const double expected = (std::sqrt(5.0) + 3.0) / 5.0;
  o.note("rho=" + num(rho, 17) + " expected=" + num(expected, 17) + " c=" + num(r.capacity, 17) +
         " t=" + num(secs, 3) + "s");
  o.require(r.certified, "certified", "search not certified");
  o.require(std::abs(rho - expected) <= 1e-6 * expected, "rho", "rho differs from (sqrt5+3)/5");
  o.require(secs < 600.0, "runtime", "runtime over 10 min");
  return o;
}

Outcome criterion_sweeps() {
  Outcome o;
  const HPolytope k = pentagon_product();
  const CapacityResult whole = capacity_bnb(k);
  const double c = whole.capacity;

  const Vec sampled = vec({0.3, -0.5, 0.7, 0.2});
  std::vector<double> depths;
  for (int i = 1; i <= 7; ++i) depths.push_back(0.2 * i);
  double worst = 0.0, at = 0.0;
  for (const SweepRow& row : sweep(k, sampled, depths)) {
    o.require(row.ok, "sweep", "sampled sweep row failed: " + row.error);
    if (row.ok && row.defect > worst) {
      worst = row.defect;
      at = row.depth;
    }
  }
  o.note("sampled max defect=" + num(worst, 6) + " at t=" + num(at, 3) + " (" + num(worst / c, 4) + " c)");
  o.require(worst >= 1e-3 * c, "sampled", "no level with defect >= 1e-3 c");

  // (u, 0): facet normals of the q-factor.
  const std::vector<double> small{0.1, 0.03, 0.01, 0.003, 0.001};
  int directions = 0;
  double worst_small = 0.0, worst_first = 0.0;
  for (int f = 0; f < k.num_facets(); ++f) {
    const Vec n = k.normal(f);
    if (n.tail(2).norm() > 1e-12) continue;
    ++directions;
    const std::vector<SweepRow> rows = sweep(k, n, small);
    for (const SweepRow& row : rows) o.require(row.ok, "boundary", "boundary sweep row failed: " + row.error);
    worst_first = std::max(worst_first, rows.front().defect);
    worst_small = std::max(worst_small, rows.back().defect);
    o.require(rows.back().defect <= 1e-6, "boundary", "defect at t=" + num(small.back()) + " above 1e-6");
  }
  o.note("(u,0) directions=" + std::to_string(directions) + " max defect t=0.1: " + num(worst_first, 3) +
         ", t=0.001: " + num(worst_small, 3));
  o.require(directions == 5, "boundary", "expected five q-facet directions");
  return o;
}

// Sample draws for the biconditional, by body.
struct CutSample {
  std::string body;
  bool additive = false;
  bool found = false;
};

Outcome criterion_combinatorial_cuts() {
  Outcome o;
  struct Source {
    std::string name;
    HPolytope body;
    int wanted;
    bool identities;
  };
  std::vector<Source> sources{{"Y", body_y(), 50, true},
                              {"simplex", standard_simplex(4), 25, false},
                              {"pentagon-product", pentagon_product(), 25, false}};
  const double lower = 1e-9, upper = 1e-6;  // band, relative to c(K)
  Rng rng(8080);
  std::uniform_real_distribution<double> frac(0.05, 0.95);
  int classified = 0, agree = 0, skipped = 0, additive = 0, cuts_checked = 0;
  double worst_sum = 0.0, worst_h1 = 0.0, worst_total = 0.0;
  for (const Source& src : sources) {
    const CapacityResult whole = capacity_bnb(src.body);
    int taken = 0;
    while (taken < src.wanted) {
      const Vec v = proptest::random_unit(rng, 4);
      const double width = support(src.body, v) + support(src.body, -v);
      const double t = frac(rng) * width;
      const CutSpec spec = cut_at_depth(src.body, v, t);
      const DefectReport d = additivity_defect(src.body, spec, {}, &whole);
      const double rel = d.raw_defect / d.capacity;
      if (rel > lower && rel < upper) {
        ++skipped;
        continue;
      }
      const bool is_additive = rel <= lower;
      const CombinatorialCutSearch r = find_combinatorial_cut(src.body, v, t, {}, src.identities);
      ++taken;
      ++classified;
      additive += is_additive ? 1 : 0;
      if (r.found() == is_additive)
        ++agree;
      else
        o.require(false, "biconditional",
                  src.name + " v=" + num(v(0), 4) + "," + num(v(1), 4) + "," + num(v(2), 4) + "," + num(v(3), 4) +
                      " t=" + num(t, 6) + " defect=" + num(d.raw_defect, 3) + " found=" + (r.found() ? "yes" : "no"));
      if (!src.identities) continue;
      for (const CombinatorialCut& cc : r.cuts) {
        ++cuts_checked;
        const double a = whole.optimal_value;
        worst_sum = std::max(worst_sum, std::abs(a - cc.a1 - cc.a2));
        worst_h1 = std::max(worst_h1, std::abs(cc.h1 - cc.a1 / a));
        const PieceSequences p = induced_piece_sequences(src.body, spec, cc);
        o.require(p.ok, "identities", "induced piece sequences rejected on " + src.name);
        worst_sum = std::max(worst_sum, p.residual_sum);
        worst_h1 = std::max(worst_h1, p.residual_h1);
        worst_total = std::max(worst_total, p.residual_total);
      }
    }
  }
  o.note("samples=" + std::to_string(classified) + " agree=" + std::to_string(agree) + " additive=" +
         std::to_string(additive) + " in-band skipped=" + std::to_string(skipped));
  o.note("Y cuts checked=" + std::to_string(cuts_checked) + " |A-A1-A2|=" + num(worst_sum, 3) + " |H1-A1/A|=" +
         num(worst_h1, 3) + " |c1+c2-c|=" + num(worst_total, 3));
  o.require(classified == 100, "biconditional", "fewer than 100 classified samples");
  o.require(additive > 0 && additive < classified, "biconditional", "grid does not exercise both sides");
  o.require(cuts_checked > 0, "identities", "no cut of Y found");
  o.require(worst_sum <= 1e-9 && worst_h1 <= 1e-9 && worst_total <= 1e-9, "identities", "identity residual above 1e-9");
  return o;
}

Outcome criterion_extended(long long global_budget) {
  Outcome o;

  // Columns of the rotation: pairwise |omega| = 1/sqrt3, exactly.
  const auto rows = exact_rotation_rows();
  const Mat a = rotated_cross_matrix();
  bool columns_exact = true, matches = true, orthogonal = true;
  std::vector<SurdVec> cols(4, SurdVec(4));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      cols[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      matches = matches && std::abs(rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].value() - a(i, j)) < 1e-15;
    }
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const Surd g = dot(cols[static_cast<std::size_t>(i)], cols[static_cast<std::size_t>(j)]);
      orthogonal = orthogonal && g == Surd(i == j ? 1 : 0);
      if (i >= j) continue;
      const Surd w = exact_omega(cols[static_cast<std::size_t>(i)], cols[static_cast<std::size_t>(j)]);
      // w = r sqrt3 with |r| = 1/3
      columns_exact = columns_exact && w.c[0] == 0 && w.c[1] == 0 && w.c[3] == 0 && abs(w.c[2]) == Rational(1, 3);
    }
  o.note("omega(cols)=+-1/sqrt3 exact: " + std::string(columns_exact ? "yes" : "no"));
  o.require(matches, "matrix", "exact rotation differs from the library matrix");
  o.require(orthogonal, "matrix", "rotation is not exactly orthogonal");
  o.require(columns_exact, "omega", "column pairing is not exactly +-1/sqrt3");

  struct Case {
    std::string name;
    HPolytope body;
    ExactPolytope exact;
  };
  std::vector<Case> cases{{"24-cell", twenty_four_cell(), exact_24cell()},
                          {"rotated-cross", rotated_cross_polytope(), exact_rotated_cross()}};
  for (const Case& c : cases) {
    o.require(std::abs(static_cast<double>(c.exact.volume) - volume(c.body)) <= 1e-12, "volume",
              c.name + " volume differs from its exact value");
    const auto t0 = Clock::now();
    SearchConfig capped;
    capped.max_subset = 5;
    const CapacityResult r = capacity_bnb(c.body, capped);
    const double rho = systolic_ratio(r.capacity, volume(c.body), 2);
    o.require(!r.maximizers.empty(), "certificate", c.name + ": no feasible sequence");
    if (r.maximizers.empty()) continue;
    const CapacitySequence& best = r.maximizers.front();
    const Certificate cert = certify(c.body, best, false);
    const ExactCertificate ex = certify_exact(c.body, c.exact, best);
    const LiftResult lift = orbit_from_sequence(c.body, best);
    o.require(cert.report.feasible, "certificate", c.name + ": sequence infeasible");
    o.require(ex.ok, "certificate", c.name + ": exact check failed: " + ex.message);
    o.require(std::abs(ex.rho_value - 1.0) <= 1e-6, "certificate", c.name + ": certified rho differs from 1");
    o.require(std::abs(rho - 1.0) <= 1e-6, "certificate", c.name + ": searched rho differs from 1");
    o.require(lift.ok && verify_orbit(c.body, lift.orbit).ok, "certificate", c.name + ": sequence does not lift");
    o.require(r.gap <= 1e-3, "restricted-gap", c.name + ": gap over supports <= 5 above 1e-3");
    std::ostringstream rho_exact;
    rho_exact << ex.rho;
    o.note(c.name + ": cert rho=" + (ex.ok ? rho_exact.str() : "n/a") + " (Q^2=" +
           (ex.ok ? ex.q_squared.str() : "n/a") + ") capped rho=" + num(rho, 17) + " gap<=5=" + num(r.gap, 3) +
           " t=" + num(seconds_since(t0), 3) + "s");

    // Global bound over all supports within the node budget.
    const auto t1 = Clock::now();
    SearchConfig global;
    global.budget = global_budget;
    double gap = std::numeric_limits<double>::infinity();
    std::string why;
    try {
      gap = capacity_bnb(c.body, global).gap;
    } catch (const Error& err) {
      why = std::string(" (") + err.what() + ")";
    }
    o.note(c.name + ": global gap=" + num(gap, 4) + " after " + std::to_string(global_budget) + " nodes t=" +
           num(seconds_since(t1), 3) + "s" + why);
    o.require(gap <= 1e-3, "global-gap", c.name + ": global branch-and-bound gap above 1e-3");
  }
  return o;
}

Outcome criterion_properties() {
  Outcome o;
  auto cap = [&](const HPolytope& k) {
    const CapacityResult r = capacity_bnb(k);
    o.require(r.certified, "certified", "uncertified capacity in property run");
    return r.capacity;
  };

  {  // planar oracle
    Rng rng(20240601);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const HPolytope p = proptest::random_polygon(rng);
      const double area = proptest::shoelace_area(p);
      worst = std::max(worst, std::abs(cap(p) - area) / std::max(1.0, area));
    }
    o.note("planar max err=" + num(worst, 3));
    o.require(worst <= 1e-9, "planar", "capacity differs from area");
  }
  {  // invariance
    Rng rng(99);
    std::vector<HPolytope> bodies{body_y(), standard_simplex(4), pentagon_product()};
    for (int i = 0; i < 3; ++i) bodies.push_back(proptest::random_body4(rng, 7));
    std::uniform_real_distribution<double> factor(0.3, 3.0), shift(-2.0, 2.0);
    double worst = 0.0;
    for (const HPolytope& k : bodies) {
      const double c = cap(k);
      const double lam = factor(rng);
      worst = std::max(worst, std::abs(cap(scaled(k, lam)) - lam * lam * c) / (lam * lam * c));
      Vec t(4);
      for (int i = 0; i < 4; ++i) t(i) = shift(rng);
      worst = std::max(worst, std::abs(cap(k.translated(t)) - c) / c);
      worst = std::max(worst, std::abs(cap(linear_image(k, proptest::random_symplectic(rng, 2))) - c) / c);
    }
    o.note("invariance max rel err=" + num(worst, 3));
    o.require(worst <= 1e-8, "invariance", "capacity not invariant within 1e-8");
  }
  {  // subadditivity
    Rng rng(4242);
    std::uniform_real_distribution<double> frac(0.05, 0.95);
    std::vector<HPolytope> bodies{body_y(), standard_simplex(4), box(Vec::Zero(4), Vec::Ones(4))};
    for (int i = 0; i < 3; ++i) bodies.push_back(proptest::random_body4(rng, 6));
    double lowest = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
      const HPolytope k = trial % 4 == 0 ? proptest::random_polygon(rng)
                                         : bodies[static_cast<std::size_t>(trial) % bodies.size()];
      const Vec v = proptest::random_unit(rng, k.dim());
      const double width = support(k, v) + support(k, -v);
      const DefectReport d = additivity_defect(k, cut_at_depth(k, v, frac(rng) * width));
      lowest = std::min(lowest, d.raw_defect / std::max(1.0, d.capacity));
    }
    o.note("200 cuts min defect=" + num(lowest, 3));
    o.require(lowest >= -1e-8, "subadditivity", "negative defect below -1e-8");
  }
  {  // exact rotation and swap invariance
    Rng rng(31337);
    const proptest::ExactBody e = proptest::exact_y();
    int rotations = 0, swaps = 0;
    bool ok = true;
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<int> f;
      std::vector<Rational> b;
      proptest::random_exact_sequence(rng, e, f, b);
      const Rational q = sequence_action_exact(e.normals, f, b);
      for (std::size_t r = 1; r < f.size(); ++r) {
        std::vector<int> fr = f;
        std::vector<Rational> br = b;
        std::rotate(fr.begin(), fr.begin() + static_cast<long>(r), fr.end());
        std::rotate(br.begin(), br.begin() + static_cast<long>(r), br.end());
        ok = ok && sequence_action_exact(e.normals, fr, br) == q;
        ++rotations;
      }
      for (std::size_t i = 0; i < f.size(); ++i) {
        const std::size_t j = (i + 1) % f.size();
        if (proptest::exact_omega(e.normals[static_cast<std::size_t>(f[i])], e.normals[static_cast<std::size_t>(f[j])]) != 0)
          continue;
        std::vector<int> fs = f;
        std::vector<Rational> bs = b;
        std::swap(fs[i], fs[j]);
        std::swap(bs[i], bs[j]);
        ok = ok && sequence_action_exact(e.normals, fs, bs) == q;
        ++swaps;
      }
    }
    o.note("exact rotations=" + std::to_string(rotations) + " swaps=" + std::to_string(swaps));
    o.require(ok, "exact", "rotation or swap changed the exact objective");
  }
  {  // orbit action of every maximizer
    struct Case {
      HPolytope body;
      int max_subset;
    };
    std::vector<Case> cases{{standard_simplex(4), 0},          {box(Vec::Zero(4), Vec::Ones(4)), 0},
                            {box(Vec::Zero(4), vec({1, 2, 3, 0.5})), 0},
                            {cross_polytope(4), 0},            {body_y(), 0},
                            {pentagon_product(), 0},           {regular_polygon(5), 0},
                            {regular_polygon(7), 0},           {twenty_four_cell(), 5},
                            {rotated_cross_polytope(), 5}};
    int orbits = 0;
    double worst = 0.0;
    for (const Case& c : cases) {
      SearchConfig cfg;
      cfg.max_subset = c.max_subset;
      const CapacityResult r = capacity_bnb(c.body, cfg);
      std::vector<CapacitySequence> all = r.maximizers;
      for (const MaximizerFamily& f : r.families) {
        all.push_back(f.interior);
        all.insert(all.end(), f.samples.begin(), f.samples.end());
      }
      for (const CapacitySequence& s : all) {
        const LiftResult lift = orbit_from_sequence(c.body, s);
        o.require(lift.ok && verify_orbit(c.body, lift.orbit).ok, "orbits", "maximizer failed to lift");
        if (!lift.ok) continue;
        worst = std::max(worst, std::abs(lift.orbit.action - r.capacity) / std::max(1.0, r.capacity));
        ++orbits;
      }
    }
    o.note("orbits=" + std::to_string(orbits) + " max |action-c|=" + num(worst, 3) + " (24-cell, AP: supports <= 5)");
    o.require(worst <= 1e-8, "orbits", "orbit action differs from capacity");
  }
  {  // split and glue
    Rng rng(5150);
    std::uniform_real_distribution<double> frac(0.05, 0.95);
    const HPolytope y = body_y();
    int trips = 0, good = 0;
    for (int trial = 0; trial < 12; ++trial) {
      const Vec v = proptest::random_unit(rng, 4);
      const double t = frac(rng) * (support(y, v) + support(y, -v));
      const CutSpec spec = cut_at_depth(y, v, t);
      for (const CombinatorialCut& cc : find_combinatorial_cut(y, v, t).cuts) {
        const LiftResult lift = orbit_from_sequence(y, cc.sequence);
        if (!lift.ok) continue;
        const SplitResult s = split_orbit(y, lift.orbit, spec);
        ++trips;
        if (!s.ok) continue;
        const ClosedOrbit g = glue_orbits(s.orbit1, s.orbit2, spec.normal, &y);
        good += same_cycle(g, lift.orbit) && std::abs(g.action - lift.orbit.action) <= 1e-9 ? 1 : 0;
      }
    }
    o.note("split/glue " + std::to_string(good) + "/" + std::to_string(trips));
    o.require(trips >= 12 && good == trips, "roundtrip", "split/glue round trip failed");
  }
  return o;
}

// Pairs of facets whose common vertices span a 2-dimensional affine set.
std::set<std::vector<int>> two_faces_from_vertices(const HPolytope& k, const std::vector<int>& facets_a,
                                                   const std::vector<int>& facets_b) {
  const VPolytope v = vertices(k);
  std::set<std::vector<int>> out;
  for (int a : facets_a)
    for (int b : facets_b) {
      std::vector<Vec> on;
      for (int i = 0; i < v.num_vertices(); ++i) {
        const Vec x = v.vertex(i);
        if (std::abs(x.dot(k.normal(a)) - k.height(a)) < 1e-9 && std::abs(x.dot(k.normal(b)) - k.height(b)) < 1e-9)
          on.push_back(x);
      }
      if (on.size() < 3) continue;
      Mat diffs(static_cast<Eigen::Index>(on.size() - 1), k.dim());
      for (std::size_t i = 1; i < on.size(); ++i) diffs.row(static_cast<Eigen::Index>(i - 1)) = (on[i] - on[0]).transpose();
      if (Eigen::FullPivLU<Mat>(diffs).rank() == 2) out.insert({std::min(a, b), std::max(a, b)});
    }
  return out;
}

int facet_with_normal(const HPolytope& k, const Vec& n) {
  for (int i = 0; i < k.num_facets(); ++i)
    if ((k.normal(i) - n).norm() < 1e-12) return i;
  return -1;
}

Outcome criterion_lagrangian_faces() {
  Outcome o;
  const std::size_t x = lagrangian_faces(twenty_four_cell()).size();
  const std::size_t ap = lagrangian_faces(rotated_cross_polytope()).size();
  o.require(x == 0, "24-cell", "24-cell has Lagrangian faces");
  o.require(ap == 0, "rotated-cross", "rotated cross-polytope has Lagrangian faces");

  const Mat w = omega_matrix(2);
  auto check = [&](const std::string& name, const HPolytope& k, std::size_t expected) {
    std::vector<int> group1, group2;  // {+-e1, +-e3} and {+-e2, +-e4}
    for (double s : {1.0, -1.0}) {
      group1.push_back(facet_with_normal(k, unit(4, 0, s)));
      group1.push_back(facet_with_normal(k, unit(4, 2, s)));
      group2.push_back(facet_with_normal(k, unit(4, 1, s)));
      group2.push_back(facet_with_normal(k, unit(4, 3, s)));
    }
    const std::set<std::vector<int>> predicted = two_faces_from_vertices(k, group1, group2);
    std::set<std::vector<int>> got;
    bool isotropic = true;
    for (const Face& f : lagrangian_faces(k)) {
      got.insert(f.active);
      isotropic = isotropic && f.dim == 2 && (f.tangent.transpose() * w * f.tangent).cwiseAbs().maxCoeff() < 1e-12;
    }
    o.note(name + ": " + std::to_string(got.size()) + " faces, predicted " + std::to_string(predicted.size()));
    o.require(got == predicted, name, name + " faces differ from the predicted family");
    o.require(got.size() == expected, name, name + " face count differs");
    o.require(isotropic, name, name + " face tangent is not Lagrangian");
  };
  o.note("24-cell: " + std::to_string(x) + ", rotated-cross: " + std::to_string(ap));
  check("Y", body_y(), 12);
  check("cube", box(Vec::Zero(4), Vec::Ones(4)), 16);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> only;
  std::vector<std::string> expect_open;
  long long global_budget = 3000;
  app.add_option("--only", only, "criteria to run (default: all)");
  app.add_option("--expect-open", expect_open, "N:clause pairs that may fail without failing the run");
  app.add_option("--global-budget", global_budget, "node budget of the global search in criterion 6");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<int, std::function<Outcome()>>> criteria{
      {1, criterion_simplex},
      {2, criterion_y},
      {3, criterion_pentagon_product},
      {4, criterion_sweeps},
      {5, criterion_combinatorial_cuts},
      {6, [&] { return criterion_extended(global_budget); }},
      {7, criterion_properties},
      {8, criterion_lagrangian_faces},
  };
  const std::set<std::string> open(expect_open.begin(), expect_open.end());
  int counted = 0;
  for (const auto& [id, run] : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.require(false, "exception", e.what());
    }
    bool blocking = false;
    std::vector<std::string> open_hits;
    for (const auto& [clause, msg] : o.failures) {
      if (open.count(std::to_string(id) + ":" + clause))
        open_hits.push_back(clause);
      else
        blocking = true;
    }
    counted += blocking ? 1 : 0;
    std::cout << "criterion " << id << ": " << (o.pass() ? "PASS" : "FAIL");
    if (!o.pass() && !blocking) std::cout << " (expected open: " << open_hits.front() << ")";
    std::cout << " [" << num(seconds_since(t0), 3) << " s]";
    for (const std::string& n : o.notes) std::cout << " | " << n;
    for (const auto& f : o.failures) std::cout << " | FAILED " << f.first << ": " << f.second;
    std::cout << std::endl;
  }
  return counted;
}
