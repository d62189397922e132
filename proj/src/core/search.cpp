#include "search.hpp"

#include "linear_program.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <functional>
#include <map>
#include <thread>

namespace ehz {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSignTol = 1e-12;

struct Prepared {
  HPolytope body;  // translated so the Chebyshev center is the origin
  PairingTable pairing;
  int facets = 0;
  int dim = 0;
  std::vector<std::vector<char>> meets;  // facets a and b share a boundary point
  Vec beta_cap;                          // per-facet upper bound on beta over M(K)
};

Prepared prepare(const HPolytope& k, bool adjacency) {
  if (k.dim() % 2 != 0)
    throw Error(ErrorKind::DimensionMismatch, "capacity needs an even-dimensional body");
  HPolytope body = k.translated(-chebyshev_center(k).center);
  Prepared p{body, PairingTable(body), body.num_facets(), body.dim(), {}, {}};

  p.meets.assign(p.facets, std::vector<char>(p.facets, 1));
  if (adjacency) {
    const VPolytope v = vertices(body);
    const double tol = 1e-8 * std::max(1.0, body.heights().cwiseAbs().maxCoeff());
    std::vector<std::vector<int>> on(v.num_vertices());
    for (int j = 0; j < v.num_vertices(); ++j)
      for (int i = 0; i < p.facets; ++i)
        if (std::abs(body.normal(i).dot(v.vertex(j)) - body.height(i)) <= tol) on[j].push_back(i);
    for (auto& row : p.meets) std::fill(row.begin(), row.end(), 0);
    for (const auto& list : on)
      for (int a : list)
        for (int b : list) p.meets[a][b] = 1;
  }

  // Box on beta: maximize beta_i over {beta >= 0, sum beta h = 1, sum beta n = 0}.
  p.beta_cap.resize(p.facets);
  for (int i = 0; i < p.facets; ++i) {
    LinearProgram lp(p.facets);
    lp.objective(i) = -1.0;
    lp.add_eq(body.heights(), 1.0);
    for (int j = 0; j < p.dim; ++j) lp.add_eq(body.normals().col(j), 0.0);
    const LpResult r = solve_lp(lp);
    p.beta_cap(i) = r.optimal() ? r.x(i) * (1.0 + 1e-9) + 1e-12 : 1.0 / body.height(i);
    p.beta_cap(i) = std::min(p.beta_cap(i), 1.0 / body.height(i));
  }
  return p;
}

struct Found {
  std::vector<int> order;
  Vec beta;
  double value = 0.0;
  bool family = false;
  int family_dimension = 0;
  std::vector<Vec> samples;
};

// Best value seen so far plus every candidate within the tie tolerance of it.
class Incumbent {
 public:
  explicit Incumbent(double tie_tol) : tie_(tie_tol) {}

  double best() const { return best_; }
  double tolerance() const { return tie_ * std::max(std::abs(best_), 1e-300); }
  double threshold() const { return best_ - tolerance(); }
  void raise_to(double v) { best_ = std::max(best_, v); }
  std::vector<Found>& found() { return found_; }

  void offer(std::span<const int> order, const FixedOrderResult& r) {
    for (const OrderCandidate& c : r.candidates)
      consider({{order.begin(), order.end()}, c.beta, c.value, false, 0, {}});
    for (const StationaryFamily& f : r.families)
      consider({{order.begin(), order.end()}, f.interior, f.value, true, f.dimension, f.samples});
  }

  void consider(Found f) {
    if (!(f.value > 1e-12)) return;
    if (f.value > best_) {
      best_ = f.value;
      const double cut = threshold();
      std::erase_if(found_, [&](const Found& g) { return g.value < cut; });
    }
    if (f.value >= threshold()) found_.push_back(std::move(f));
  }

 private:
  double tie_;
  double best_ = -kInf;
  std::vector<Found> found_;
};

CapacitySequence as_sequence(const std::vector<int>& order, const Vec& beta, double value) {
  CapacitySequence s;
  for (std::size_t i = 0; i < order.size(); ++i)
    if (beta(static_cast<Eigen::Index>(i)) > 0.0) s.entries.push_back({order[i], beta(i)});
  s.value = value;
  return s;
}

std::vector<int> facets_of(const CapacitySequence& s) {
  std::vector<int> f;
  for (const SequenceEntry& e : s.entries) f.push_back(e.facet);
  return f;
}

// Deduplicates by canonical class and fills the result.
void finish(const Prepared& p, std::vector<Found> found, double tie_tol, CapacityResult& out) {
  double best = -kInf;
  for (const Found& f : found) best = std::max(best, f.value);
  if (!(best > 0.0)) throw Error(ErrorKind::Internal, "no feasible sequence found");
  const double cut = best - tie_tol * best;
  std::map<std::vector<int>, CapacitySequence> maxima;
  std::map<std::vector<int>, MaximizerFamily> families;
  for (const Found& f : found) {
    if (f.value < cut) continue;
    CapacitySequence seq = canonical_form(p.pairing, as_sequence(f.order, f.beta, f.value));
    const std::vector<int> key = facets_of(seq);
    maxima.emplace(key, seq);
    if (f.family && !families.count(key)) {
      MaximizerFamily fam;
      fam.order = key;
      fam.dimension = f.family_dimension;
      fam.interior = seq;
      for (const Vec& s : f.samples) {
        CapacitySequence piece = as_sequence(f.order, s, 0.0);
        piece.value = sequence_action(p.body, piece);
        fam.samples.push_back(canonical_form(p.pairing, piece));
        Vec aligned(static_cast<Eigen::Index>(key.size()));
        for (std::size_t a = 0; a < key.size(); ++a) {
          const auto pos = std::find(f.order.begin(), f.order.end(), key[a]) - f.order.begin();
          aligned(static_cast<Eigen::Index>(a)) = s(pos);
        }
        fam.sample_coefficients.push_back(aligned);
      }
      families.emplace(key, std::move(fam));
    }
  }
  out.optimal_value = best;
  out.capacity = 1.0 / (2.0 * best);
  for (auto& [key, seq] : maxima) out.maximizers.push_back(std::move(seq));
  for (auto& [key, fam] : families) out.families.push_back(std::move(fam));
}

int thread_count(const SearchConfig& cfg, std::size_t tasks) {
  int t = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::thread::hardware_concurrency());
  t = std::max(1, t);
  return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(t), std::max<std::size_t>(tasks, 1)));
}

template <class Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) fn(i);
  };
  if (threads <= 1) {
    work();
    return;
  }
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(work);
  for (auto& th : pool) th.join();
}

void for_each_subset(int n, int k, const std::function<void(const std::vector<int>&)>& fn) {
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

// ---------------------------------------------------------------------------
// Branch and bound.

class BnbWorker {
 public:
  BnbWorker(const Prepared& p, const SearchConfig& cfg, int max_len, long long node_limit)
      : p_(p), cfg_(cfg), max_len_(max_len), limit_(node_limit), inc_(cfg.tie_tol),
        used_(p.facets, 0) {}

  Incumbent& incumbent() { return inc_; }
  SearchStats& stats() { return stats_; }
  bool exhausted() const { return exhausted_; }
  double open_bound() const { return open_bound_; }

  // Admissibility of appending w to the current prefix.
  bool can_append(int w) {
    const int last = prefix_.back();
    const double s = p_.pairing(w, last);
    if (s < -kSignTol || (std::abs(s) <= kSignTol && w < last)) {
      ++stats_.pruned_pair;
      return false;
    }
    if (!p_.meets[last][w]) {
      ++stats_.pruned_adjacency;
      return false;
    }
    return true;
  }

  // Explores the subtree rooted at `start` (which must already be admissible).
  void explore(const std::vector<int>& start) {
    for (int f : start) push(f);
    const double b = bound();
    if (b < prune_level()) {
      ++stats_.pruned_bound;
    } else {
      dfs(b);
    }
    for (std::size_t i = 0; i < start.size(); ++i) pop();
  }

  double bound() {
    const double s = spectral_bound();
    if (cfg_.bound == BoundKind::Spectral) return s;
    if (cfg_.bound == BoundKind::Combined && s < prune_level()) return s;
    const double l = lift_bound();
    return cfg_.bound == BoundKind::Lift ? l : std::min(s, l);
  }

 private:
  double prune_level() const {
    if (!std::isfinite(inc_.best())) return -kInf;
    return inc_.threshold() - 1e-8 * std::abs(inc_.best());
  }

  void push(int f) {
    prefix_.push_back(f);
    used_[f] = 1;
  }
  void pop() {
    used_[prefix_.back()] = 0;
    prefix_.pop_back();
  }

  std::vector<int> available() const {
    std::vector<int> a;
    for (int f = prefix_.front() + 1; f < p_.facets; ++f)
      if (!used_[f]) a.push_back(f);
    return a;
  }

  void dfs(double node_bound) {
    if (exhausted_ || stats_.nodes >= limit_) {
      exhausted_ = true;
      open_bound_ = std::max(open_bound_, node_bound);
      return;
    }
    ++stats_.nodes;
    const int len = static_cast<int>(prefix_.size());
    if (len >= 2) evaluate_cycle();
    if (len >= max_len_) return;
    for (int w : available()) {
      if (!can_append(w)) continue;
      push(w);
      const double b = bound();
      if (b < prune_level()) {
        ++stats_.pruned_bound;
      } else if (exhausted_) {
        open_bound_ = std::max(open_bound_, b);
      } else {
        dfs(b);
      }
      pop();
    }
  }

  void evaluate_cycle() {
    const int first = prefix_.front(), last = prefix_.back();
    if (p_.pairing(first, last) < -kSignTol || !p_.meets[last][first]) return;
    ++stats_.orders_evaluated;
    inc_.offer(prefix_, solve_order_interior(p_.body.normals(), p_.body.heights(), p_.pairing,
                                             prefix_));
  }

  // Q <= (1/2) lambda_max(S~) |beta|^2, with known orientations inside the
  // prefix and between prefix and completion, |omega| among completion facets.
  double spectral_bound() const {
    const std::vector<int> rest = available();
    const int k = static_cast<int>(prefix_.size());
    const int u = k + static_cast<int>(rest.size());
    std::vector<int> all(prefix_);
    all.insert(all.end(), rest.begin(), rest.end());
    Mat s = Mat::Zero(u, u);
    double box = 0.0;
    for (int a = 0; a < u; ++a) {
      box += p_.beta_cap(all[a]) * p_.beta_cap(all[a]);
      for (int b = 0; b < a; ++b) {
        const double w = (a < k || b < k) ? p_.pairing(all[a], all[b])
                                           : std::abs(p_.pairing(all[a], all[b]));
        s(a, b) = s(b, a) = w;
      }
    }
    const double lmax = Eigen::SelfAdjointEigenSolver<Mat>(s, Eigen::EigenvaluesOnly)
                            .eigenvalues()
                            .maxCoeff();
    return 0.5 * std::max(lmax, 0.0) * box * (1.0 + 1e-9);
  }

  // A maximizer in this subtree lifts to a closed characteristic whose first
  // segments run along the prefix facets; the least action of any such
  // polygonal chain closed by completion facets bounds the capacity below.
  double lift_bound() const {
    const std::vector<int> rest = available();
    const int d = p_.dim;
    const int k = static_cast<int>(prefix_.size());
    const int a = static_cast<int>(rest.size());
    const int nv = d + k + a;
    LinearProgram lp(nv);
    for (int j = 0; j < d; ++j) lp.free_var[j] = true;
    for (int i = 0; i < k; ++i) lp.objective(d + i) = 0.5 * p_.body.height(prefix_[i]);
    for (int i = 0; i < a; ++i) lp.objective(d + k + i) = 0.5 * p_.body.height(rest[i]);

    const int m = p_.facets;
    lp.a_eq = Mat::Zero(k + d, nv);
    lp.b_eq = Vec::Zero(k + d);
    lp.a_le = Mat::Zero((k + 1) * m, nv);
    lp.b_le = Vec::Zero((k + 1) * m);
    // Vertex q_i = x - sum_{j<=i} s_j J n_{p_j}; <J x, y> = omega(x, y).
    for (int i = 0; i < k; ++i) {
      const int f = prefix_[i];
      lp.a_eq.row(i).head(d) = p_.body.normals().row(f);
      for (int j = 0; j < i; ++j) lp.a_eq(i, d + j) = -p_.pairing(prefix_[j], f);
      lp.b_eq(i) = p_.body.height(f);
    }
    for (int i = 0; i < k; ++i)
      lp.a_eq.block(k, d + i, d, 1) = p_.body.normals().row(prefix_[i]).transpose();
    for (int i = 0; i < a; ++i)
      lp.a_eq.block(k, d + k + i, d, 1) = p_.body.normals().row(rest[i]).transpose();
    for (int i = 0; i <= k; ++i) {
      for (int f = 0; f < m; ++f) {
        const int row = i * m + f;
        lp.a_le.row(row).head(d) = p_.body.normals().row(f);
        for (int j = 0; j < i; ++j) lp.a_le(row, d + j) = -p_.pairing(prefix_[j], f);
        lp.b_le(row) = p_.body.height(f);
      }
    }
    const LpResult r = solve_lp(lp);
    if (r.status == LpStatus::Infeasible) return -kInf;
    if (!r.optimal() || r.value <= 1e-12) return kInf;
    return 1.0 / (2.0 * r.value) * (1.0 + 1e-8);
  }

  const Prepared& p_;
  const SearchConfig& cfg_;
  int max_len_;
  long long limit_;
  Incumbent inc_;
  SearchStats stats_;
  std::vector<int> prefix_;
  std::vector<char> used_;
  bool exhausted_ = false;
  double open_bound_ = -kInf;
};

void add_stats(SearchStats& a, const SearchStats& b) {
  a.nodes += b.nodes;
  a.orders_evaluated += b.orders_evaluated;
  a.pruned_pair += b.pruned_pair;
  a.pruned_adjacency += b.pruned_adjacency;
  a.pruned_bound += b.pruned_bound;
}

int subset_cap(const SearchConfig& cfg, int facets) {
  if (cfg.max_subset < 0) throw Error(ErrorKind::InvalidArgument, "max subset size must be positive");
  return cfg.max_subset == 0 ? facets : std::min(cfg.max_subset, facets);
}

}  // namespace

double bruteforce_order_count(int facets, int max_subset) {
  double total = 0.0;
  for (int m = 2; m <= std::min(max_subset, facets); ++m) {
    double c = 1.0;  // C(facets, m) * (m-1)!
    for (int i = 0; i < m; ++i) c *= static_cast<double>(facets - i);
    c /= m;
    total += c;
  }
  return total;
}

CapacityResult capacity_bruteforce(const HPolytope& k, const SearchConfig& cfg) {
  const Prepared p = prepare(k, false);
  const int cap = subset_cap(cfg, p.facets);
  const double count = bruteforce_order_count(p.facets, cap);
  if (count > static_cast<double>(cfg.budget))
    throw Error(ErrorKind::BudgetExceeded,
                "exhaustive search needs " + std::to_string(static_cast<long long>(count)) +
                    " orders, above the budget; use the branch-and-bound engine");

  std::vector<std::vector<int>> subsets;
  for (int m = 2; m <= cap; ++m)
    for_each_subset(p.facets, m, [&](const std::vector<int>& s) { subsets.push_back(s); });

  const int threads = thread_count(cfg, subsets.size());
  std::vector<Incumbent> incs(subsets.size(), Incumbent(cfg.tie_tol));
  std::vector<long long> evaluated(subsets.size(), 0);
  parallel_for(subsets.size(), threads, [&](std::size_t i) {
    std::vector<int> order = subsets[i];
    do {
      ++evaluated[i];
      incs[i].offer(order, solve_order_interior(p.body.normals(), p.body.heights(), p.pairing, order));
    } while (std::next_permutation(order.begin() + 1, order.end()));
  });

  CapacityResult out;
  out.engine = "brute";
  std::vector<Found> found;
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    out.stats.orders_evaluated += evaluated[i];
    for (Found& f : incs[i].found()) found.push_back(std::move(f));
  }
  out.stats.nodes = static_cast<long long>(subsets.size());
  finish(p, std::move(found), cfg.tie_tol, out);
  out.value_upper_bound = out.optimal_value;
  out.gap = 0.0;
  out.max_subset = cap;
  out.complete = cap >= p.facets;
  out.certified = out.complete;
  return out;
}

CapacityResult capacity_bnb(const HPolytope& k, const SearchConfig& cfg) {
  if (cfg.budget <= 0) throw Error(ErrorKind::InvalidArgument, "node budget must be positive");
  if (!(cfg.target_gap >= 0.0 && cfg.target_gap < 1.0))
    throw Error(ErrorKind::InvalidArgument, "target gap must lie in [0, 1)");
  const Prepared p = prepare(k, cfg.adjacency);
  const int cap = subset_cap(cfg, p.facets);

  // Deterministic warm start shared by every subtree: short supports first,
  // then a node-limited pass over the full tree.
  BnbWorker shallow(p, cfg, std::min(cap, p.dim), cfg.budget);
  for (int f = 0; f < p.facets && !shallow.exhausted(); ++f) shallow.explore({f});
  BnbWorker seed(p, cfg, cap, std::max<long long>(1, std::min(cfg.seed_nodes, cfg.budget / 10)));
  seed.incumbent().raise_to(shallow.incumbent().best());
  for (int f = 0; f < p.facets && !seed.exhausted(); ++f) seed.explore({f});
  const double seed_best = seed.incumbent().best();

  // Top-level subtrees: admissible two-facet prefixes.
  std::vector<std::vector<int>> tasks;
  SearchStats root_stats;
  for (int f = 0; f < p.facets; ++f) {
    for (int w = f + 1; w < p.facets; ++w) {
      if (p.pairing(w, f) < -kSignTol) {
        ++root_stats.pruned_pair;
      } else if (!p.meets[f][w]) {
        ++root_stats.pruned_adjacency;
      } else {
        tasks.push_back({f, w});
      }
    }
  }

  const long long share = std::max<long long>(1, (cfg.budget - seed.stats().nodes) /
                                                     std::max<long long>(1, static_cast<long long>(tasks.size())));
  struct TaskOut {
    std::vector<Found> found;
    SearchStats stats;
    bool exhausted = false;
    double open_bound = -kInf;
    double best = -kInf;
  };
  std::vector<TaskOut> outs(tasks.size());
  parallel_for(tasks.size(), thread_count(cfg, tasks.size()), [&](std::size_t i) {
    BnbWorker w(p, cfg, cap, share);
    w.incumbent().raise_to(seed_best);
    w.explore(tasks[i]);
    outs[i].found = std::move(w.incumbent().found());
    outs[i].stats = w.stats();
    outs[i].exhausted = w.exhausted();
    outs[i].open_bound = w.open_bound();
    outs[i].best = w.incumbent().best();
  });

  CapacityResult out;
  out.engine = "bnb";
  out.stats = shallow.stats();
  add_stats(out.stats, seed.stats());
  add_stats(out.stats, root_stats);
  std::vector<Found> found = std::move(shallow.incumbent().found());
  for (Found& f : seed.incumbent().found()) found.push_back(std::move(f));
  double open = -kInf;
  bool exhausted = false;
  for (TaskOut& t : outs) {
    add_stats(out.stats, t.stats);
    for (Found& f : t.found) found.push_back(std::move(f));
    open = std::max(open, t.open_bound);
    exhausted = exhausted || t.exhausted;
  }
  if (exhausted && std::none_of(found.begin(), found.end(), [](const Found& f) { return f.value > 0.0; }))
    throw Error(ErrorKind::BudgetExceeded, "node budget exhausted before a feasible sequence was found");
  finish(p, std::move(found), cfg.tie_tol, out);
  out.value_upper_bound = exhausted ? std::max(out.optimal_value, open) : out.optimal_value;
  out.gap = (out.value_upper_bound - out.optimal_value) / out.optimal_value;
  out.max_subset = cap;
  out.complete = cap >= p.facets;
  out.certified = out.complete && out.gap <= cfg.target_gap;
  return out;
}

CapacityResult compute_capacity(const HPolytope& k, Engine engine, const SearchConfig& cfg) {
  return engine == Engine::Brute ? capacity_bruteforce(k, cfg) : capacity_bnb(k, cfg);
}

double systolic_ratio(double capacity, double volume, int half_dim) {
  if (!(volume > 0.0)) throw Error(ErrorKind::Degenerate, "volume must be positive");
  double fact = 1.0;
  for (int i = 2; i <= half_dim; ++i) fact *= i;
  return std::pow(capacity, half_dim) / (fact * volume);
}

}  // namespace ehz
