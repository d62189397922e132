#include "sequence.hpp"

#include "linear_program.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace ehz {

PairingTable::PairingTable(const HPolytope& k) : table_(k.num_facets(), k.num_facets()) {
  const int n = k.dim() / 2;
  const Mat w = omega_matrix(n);
  table_ = k.normals() * w * k.normals().transpose();
}

namespace {

void check_indices(const HPolytope& k, std::span<const SequenceEntry> entries) {
  for (const SequenceEntry& e : entries)
    if (e.facet < 0 || e.facet >= k.num_facets())
      throw Error(ErrorKind::InvalidArgument, "sequence refers to a missing facet");
}

double order_value(const PairingTable& pairing, std::span<const int> order, const Vec& beta) {
  double q = 0.0;
  for (std::size_t a = 1; a < order.size(); ++a) {
    double inner = 0.0;
    for (std::size_t b = 0; b < a; ++b) inner += beta(b) * pairing(order[a], order[b]);
    q += beta(a) * inner;
  }
  return q;
}

constexpr double kPositive = 1e-10;

// Orthonormal basis of the column space of m.
Mat column_basis(const Mat& m, double tol) {
  if (m.cols() == 0) return Mat(m.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tol) ++r;
  return svd.matrixU().leftCols(r);
}

std::optional<StationaryFamily> family_within_orthant(const Vec& base, const Mat& dirs,
                                                      const PairingTable& pairing,
                                                      std::span<const int> order) {
  const int m = static_cast<int>(base.size());
  const int f = static_cast<int>(dirs.cols());
  // max t  s.t.  base + dirs z >= t, t <= 1.
  LinearProgram lp(f + 1);
  for (int j = 0; j <= f; ++j) lp.free_var[j] = true;
  lp.objective(f) = -1.0;
  lp.a_le.resize(m + 1, f + 1);
  lp.a_le.setZero();
  lp.a_le.topLeftCorner(m, f) = -dirs;
  lp.a_le.col(f).head(m).setOnes();
  lp.a_le(m, f) = 1.0;
  lp.b_le.resize(m + 1);
  lp.b_le.head(m) = base;
  lp.b_le(m) = 1.0;
  const LpResult deep = solve_lp(lp);
  if (!deep.optimal() || deep.x(f) <= kPositive) return std::nullopt;

  StationaryFamily fam;
  fam.dimension = f;
  fam.interior = base + dirs * deep.x.head(f);
  fam.value = order_value(pairing, order, fam.interior);

  auto clean = [](Vec b) {
    for (Eigen::Index i = 0; i < b.size(); ++i)
      if (std::abs(b(i)) < 1e-12) b(i) = 0.0;
    return b;
  };
  if (f == 1) {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (int a = 0; a < m; ++a) {
      const double c = dirs(a, 0);
      if (c > 1e-14) lo = std::max(lo, -base(a) / c);
      else if (c < -1e-14) hi = std::min(hi, -base(a) / c);
    }
    if (std::isfinite(lo)) fam.samples.push_back(clean(base + lo * dirs.col(0)));
    if (std::isfinite(hi)) fam.samples.push_back(clean(base + hi * dirs.col(0)));
  } else {
    for (int j = 0; j < f; ++j) {
      for (double sgn : {1.0, -1.0}) {
        LinearProgram ext(f);
        for (int c = 0; c < f; ++c) ext.free_var[c] = true;
        ext.objective(j) = sgn;
        ext.a_le = -dirs;
        ext.b_le = base;
        const LpResult r = solve_lp(ext);
        if (r.optimal()) fam.samples.push_back(clean(base + dirs * r.x));
      }
    }
  }
  return fam;
}

}  // namespace

double sequence_action(const HPolytope& k, std::span<const SequenceEntry> entries) {
  check_indices(k, entries);
  double q = 0.0;
  for (std::size_t i = 1; i < entries.size(); ++i) {
    const Vec ni = k.normal(entries[i].facet);
    for (std::size_t j = 0; j < i; ++j)
      q += entries[i].beta * entries[j].beta * omega(ni, k.normal(entries[j].facet));
  }
  return q;
}

double sequence_action(const HPolytope& k, const CapacitySequence& seq) {
  return sequence_action(k, std::span<const SequenceEntry>(seq.entries));
}

FeasibilityReport sequence_feasible(const HPolytope& k, const CapacitySequence& seq, double tol) {
  check_indices(k, seq.entries);
  FeasibilityReport rep;
  Vec closing = Vec::Zero(k.dim());
  double norm = 0.0;
  rep.min_beta = seq.entries.empty() ? 0.0 : std::numeric_limits<double>::infinity();
  for (const SequenceEntry& e : seq.entries) {
    closing += e.beta * k.normal(e.facet);
    norm += e.beta * k.height(e.facet);
    rep.min_beta = std::min(rep.min_beta, e.beta);
  }
  rep.closing_residual = closing.cwiseAbs().maxCoeff();
  rep.normalization_residual = std::abs(norm - 1.0);
  std::ostringstream msg;
  if (seq.entries.empty()) msg << "empty sequence; ";
  if (rep.min_beta <= 0.0) msg << "non-positive coefficient " << rep.min_beta << "; ";
  if (rep.closing_residual > tol) msg << "closing residual " << rep.closing_residual << "; ";
  if (rep.normalization_residual > tol)
    msg << "normalization residual " << rep.normalization_residual << "; ";
  rep.message = msg.str();
  rep.feasible = rep.message.empty();
  if (rep.feasible) rep.message = "feasible";
  return rep;
}

FixedOrderResult solve_order_interior(const Mat& normals, const Vec& heights,
                                      const PairingTable& pairing, std::span<const int> order) {
  FixedOrderResult out;
  const int m = static_cast<int>(order.size());
  const int d = static_cast<int>(normals.cols());
  if (m < 2) return out;
  const int size = m + d + 1;
  Mat kkt = Mat::Zero(size, size);
  Vec rhs = Vec::Zero(size);
  rhs(m) = 1.0;
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < a; ++b) {
      const double s = pairing(order[a], order[b]);
      kkt(a, b) = s;
      kkt(b, a) = s;
    }
    kkt(m, a) = kkt(a, m) = heights(order[a]);
    for (int j = 0; j < d; ++j) kkt(m + 1 + j, a) = kkt(a, m + 1 + j) = normals(order[a], j);
  }
  Eigen::FullPivLU<Mat> lu(kkt);
  lu.setThreshold(1e-10);
  const Vec x = lu.solve(rhs);
  if ((kkt * x - rhs).norm() > 1e-8 * (1.0 + x.norm())) return out;  // no stationary point
  const Vec beta = x.head(m);

  Mat dirs(m, 0);
  if (lu.rank() < size) dirs = column_basis(lu.kernel().topRows(m), 1e-9);

  if (dirs.cols() == 0) {
    if (beta.minCoeff() > kPositive)
      out.candidates.push_back({beta, order_value(pairing, order, beta)});
    return out;
  }
  if (auto fam = family_within_orthant(beta, dirs, pairing, order)) out.families.push_back(*fam);
  return out;
}

FixedOrderSolution solve_fixed_order(const HPolytope& k, std::span<const int> order,
                                     int max_order_for_faces) {
  const int m = static_cast<int>(order.size());
  if (m < 2) throw Error(ErrorKind::InvalidArgument, "order needs at least two facets");
  for (int i = 0; i < m; ++i) {
    if (order[i] < 0 || order[i] >= k.num_facets())
      throw Error(ErrorKind::InvalidArgument, "order refers to a missing facet");
    for (int j = 0; j < i; ++j)
      if (order[i] == order[j]) throw Error(ErrorKind::InvalidArgument, "order repeats a facet");
  }
  const PairingTable pairing(k);
  FixedOrderSolution sol;

  auto add = [&](const std::vector<int>& positions, const FixedOrderResult& r) {
    auto widen = [&](const Vec& b) {
      Vec full = Vec::Zero(m);
      for (std::size_t i = 0; i < positions.size(); ++i) full(positions[i]) = b(i);
      return full;
    };
    for (const OrderCandidate& c : r.candidates)
      sol.candidates.push_back({positions, widen(c.beta), c.value, false, 0, {}});
    for (const StationaryFamily& f : r.families) {
      FixedOrderSolution::Entry e{positions, widen(f.interior), f.value, true, f.dimension, {}};
      for (const Vec& s : f.samples) e.family_samples.push_back(widen(s));
      sol.candidates.push_back(std::move(e));
      sol.degenerate = true;
    }
  };

  if (m > max_order_for_faces) {
    std::vector<int> all(m);
    for (int i = 0; i < m; ++i) all[i] = i;
    add(all, solve_order_interior(k.normals(), k.heights(), pairing, order));
  } else {
    for (unsigned mask = 1; mask < (1u << m); ++mask) {
      std::vector<int> positions, sub;
      for (int i = 0; i < m; ++i)
        if (mask & (1u << i)) {
          positions.push_back(i);
          sub.push_back(order[i]);
        }
      if (sub.size() < 2) continue;
      add(positions, solve_order_interior(k.normals(), k.heights(), pairing, sub));
    }
  }
  std::stable_sort(sol.candidates.begin(), sol.candidates.end(),
                   [](const auto& a, const auto& b) { return a.value > b.value; });
  return sol;
}

namespace {

std::vector<int> facet_list(const std::vector<SequenceEntry>& e) {
  std::vector<int> f(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) f[i] = e[i].facet;
  return f;
}

// Lexicographically smallest rotation by facet index.
void normalize_rotation(std::vector<SequenceEntry>& e) {
  const std::size_t m = e.size();
  std::size_t best = 0;
  for (std::size_t s = 1; s < m; ++s) {
    for (std::size_t i = 0; i < m; ++i) {
      const int a = e[(s + i) % m].facet, b = e[(best + i) % m].facet;
      if (a != b) {
        if (a < b) best = s;
        break;
      }
    }
  }
  std::rotate(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(best), e.end());
}

}  // namespace

CapacitySequence canonical_form(const PairingTable& pairing, CapacitySequence seq) {
  auto& e = seq.entries;
  if (e.size() < 2) return seq;
  normalize_rotation(e);
  // Breadth-first walk over cyclically adjacent swaps of omega-null pairs;
  // the representative is the smallest facet list reached.
  constexpr std::size_t kMaxStates = 4096;
  std::set<std::vector<int>> seen{facet_list(e)};
  std::vector<std::vector<SequenceEntry>> queue{e};
  std::vector<SequenceEntry> best = e;
  for (std::size_t head = 0; head < queue.size() && seen.size() < kMaxStates; ++head) {
    const auto cur = queue[head];
    const std::size_t m = cur.size();
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t j = (i + 1) % m;
      if (cur[i].facet == cur[j].facet) continue;
      if (std::abs(pairing(cur[i].facet, cur[j].facet)) > 1e-12) continue;
      auto next = cur;
      std::swap(next[i], next[j]);
      normalize_rotation(next);
      auto key = facet_list(next);
      if (!seen.insert(key).second) continue;
      if (key < facet_list(best)) best = next;
      queue.push_back(std::move(next));
    }
  }
  e = std::move(best);
  return seq;
}

std::vector<CapacitySequence> equivalent_sequences(const PairingTable& pairing,
                                                   const CapacitySequence& seq,
                                                   std::size_t max_states) {
  using Key = std::vector<std::pair<int, double>>;
  auto key_of = [](const std::vector<SequenceEntry>& e) {
    Key k;
    for (const SequenceEntry& x : e) k.emplace_back(x.facet, x.beta);
    return k;
  };
  std::vector<CapacitySequence> out{seq};
  if (seq.entries.size() < 2) return out;
  std::set<Key> seen{key_of(seq.entries)};
  for (std::size_t head = 0; head < out.size() && out.size() < max_states; ++head) {
    const std::vector<SequenceEntry> cur = out[head].entries;
    const std::size_t m = cur.size();
    std::vector<std::vector<SequenceEntry>> next;
    auto rot = cur;
    std::rotate(rot.begin(), rot.begin() + 1, rot.end());
    next.push_back(std::move(rot));
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t j = (i + 1) % m;
      if (cur[i].facet == cur[j].facet) continue;
      if (std::abs(pairing(cur[i].facet, cur[j].facet)) > 1e-12) continue;
      auto sw = cur;
      std::swap(sw[i], sw[j]);
      next.push_back(std::move(sw));
    }
    for (auto& e : next) {
      if (!seen.insert(key_of(e)).second) continue;
      CapacitySequence s;
      s.entries = std::move(e);
      s.value = seq.value;
      out.push_back(std::move(s));
      if (out.size() >= max_states) break;
    }
  }
  return out;
}

std::vector<int> canonical_order(const PairingTable& pairing, std::vector<int> order) {
  CapacitySequence s;
  for (int f : order) s.entries.push_back({f, 1.0});
  s = canonical_form(pairing, std::move(s));
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = s.entries[i].facet;
  return order;
}

Rational to_rational(double x, long long max_den) {
  if (!std::isfinite(x)) throw Error(ErrorKind::InvalidArgument, "non-finite value");
  // Continued-fraction convergents of x.
  long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double r = x;
  for (int iter = 0; iter < 64; ++iter) {
    const double a_f = std::floor(r);
    if (std::abs(a_f) > 9e15) break;
    const long long a = static_cast<long long>(a_f);
    const long long k2 = a * k1 + k0;
    if (k2 > max_den) break;
    const long long h2 = a * h1 + h0;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    const double frac = r - a_f;
    if (frac < 1e-15) break;
    r = 1.0 / frac;
    if (std::abs(static_cast<double>(h1) / static_cast<double>(k1) - x) <= 1e-15 * std::abs(x))
      break;
  }
  if (k1 == 0) return Rational(0);
  return Rational(boost::multiprecision::cpp_int(h1), boost::multiprecision::cpp_int(k1));
}

Rational sequence_action_exact(const std::vector<std::vector<Rational>>& normals,
                               const std::vector<int>& facets, const std::vector<Rational>& betas) {
  Rational q = 0;
  for (std::size_t i = 1; i < facets.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      q += betas[i] * betas[j] *
           omega<Rational>(normals[facets[i]], normals[facets[j]]);
  return q;
}

Certificate certify(const HPolytope& k, const CapacitySequence& seq, bool rational, double tol) {
  Certificate cert;
  cert.report = sequence_feasible(k, seq, tol);
  if (!cert.report.feasible)
    throw Error(ErrorKind::Infeasible, "sequence is not in the constraint set: " + cert.report.message);
  cert.value = sequence_action(k, seq);
  if (!(cert.value > 0.0))
    throw Error(ErrorKind::Infeasible, "sequence has non-positive objective value");
  cert.capacity_upper_bound = 1.0 / (2.0 * cert.value);
  if (!rational) return cert;

  // Exact check: every datum must be reproduced by a small rational.
  auto exact = [](double x, Rational* out) {
    *out = to_rational(x);
    const double back = static_cast<double>(*out);
    return std::abs(back - x) <= 4e-16 * std::max(1.0, std::abs(x)) * 4;
  };
  std::vector<std::vector<Rational>> normals(k.num_facets());
  std::vector<Rational> heights(k.num_facets());
  for (int i = 0; i < k.num_facets(); ++i) {
    normals[i].resize(k.dim());
    for (int j = 0; j < k.dim(); ++j)
      if (!exact(k.normals()(i, j), &normals[i][j])) return cert;
    if (!exact(k.height(i), &heights[i])) return cert;
  }
  std::vector<int> facets;
  std::vector<Rational> betas;
  for (const SequenceEntry& e : seq.entries) {
    Rational b;
    if (!exact(e.beta, &b)) {
      // Coefficients from a float solve: accept the nearest small rational.
      b = to_rational(e.beta);
      if (std::abs(static_cast<double>(b) - e.beta) > tol) return cert;
    }
    facets.push_back(e.facet);
    betas.push_back(b);
  }
  std::vector<Rational> closing(k.dim(), Rational(0));
  Rational norm = 0;
  for (std::size_t i = 0; i < facets.size(); ++i) {
    if (betas[i] <= 0) return cert;
    for (int j = 0; j < k.dim(); ++j) closing[j] += betas[i] * normals[facets[i]][j];
    norm += betas[i] * heights[facets[i]];
  }
  for (const Rational& c : closing)
    if (c != 0) return cert;
  if (norm != 1) return cert;
  const Rational q = sequence_action_exact(normals, facets, betas);
  if (q <= 0) return cert;
  cert.exact = true;
  cert.exact_value = q.str();
  cert.exact_upper_bound = Rational(Rational(1) / (2 * q)).str();
  return cert;
}

}  // namespace ehz
