#pragma once

// Ordered coefficient sequences (beta_i, n_i) over the facets of a polytope,
// the quadratic objective Q = sum_{j<i} beta_i beta_j omega(n_i, n_j), the
// constraint set (sum beta_i n_i = 0, sum beta_i h_i = 1, beta > 0), and the
// fixed-order stationary-point solve used by the search engines.

#include "polytope.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ehz {

struct SequenceEntry {
  int facet = 0;
  double beta = 0.0;
};

struct CapacitySequence {
  std::vector<SequenceEntry> entries;
  double value = 0.0;  // Q of the stored order
};

// omega(n_a, n_b) for every facet pair, computed once per body.
class PairingTable {
 public:
  explicit PairingTable(const HPolytope& k);
  double operator()(int a, int b) const { return table_(a, b); }
  const Mat& matrix() const { return table_; }

 private:
  Mat table_;
};

double sequence_action(const HPolytope& k, std::span<const SequenceEntry> entries);
double sequence_action(const HPolytope& k, const CapacitySequence& seq);

struct FeasibilityReport {
  bool feasible = false;
  double closing_residual = 0.0;        // |sum beta_i n_i|_inf
  double normalization_residual = 0.0;  // |sum beta_i h_i - 1|
  double min_beta = 0.0;
  std::string message;
};

FeasibilityReport sequence_feasible(const HPolytope& k, const CapacitySequence& seq,
                                    double tol = 1e-9);

// Stationary set of Q on the slice {C beta = e_1} for one fixed order.
struct OrderCandidate {
  Vec beta;
  double value = 0.0;
};

struct StationaryFamily {
  int dimension = 0;          // dimension of the beta-family
  Vec interior;               // a point with all entries strictly positive
  std::vector<Vec> samples;   // extreme points of the family within beta >= 0
  double value = 0.0;
};

struct FixedOrderResult {
  std::vector<OrderCandidate> candidates;  // isolated, all beta > 0
  std::vector<StationaryFamily> families;  // singular KKT systems
  bool degenerate() const { return !families.empty(); }
};

// Interior-only kernel: stationary points with every beta strictly positive.
FixedOrderResult solve_order_interior(const Mat& normals, const Vec& heights,
                                      const PairingTable& pairing, std::span<const int> order);

// Fixed-order maximization over the whole feasible polytope of the order:
// runs the interior kernel on every order-preserving sub-support so that
// boundary optima (zero coefficients) surface as well. Candidates keep the
// full order length with zeros where a coefficient vanishes.
struct FixedOrderSolution {
  struct Entry {
    std::vector<int> support;  // positions into the order
    Vec beta;                  // length = order size
    double value = 0.0;
    bool family = false;
    int family_dimension = 0;
    std::vector<Vec> family_samples;  // full-length betas
  };
  std::vector<Entry> candidates;  // sorted by decreasing value
  bool degenerate = false;
};

FixedOrderSolution solve_fixed_order(const HPolytope& k, std::span<const int> order,
                                     int max_order_for_faces = 14);

// Representative of the class under cyclic rotation and swaps of cyclically
// adjacent omega-null pairs: the smallest facet list in the class. Q is
// unchanged along the class on feasible sequences.
CapacitySequence canonical_form(const PairingTable& pairing, CapacitySequence seq);
std::vector<int> canonical_order(const PairingTable& pairing, std::vector<int> order);

// Every sequence reachable by rotations and swaps of cyclically adjacent
// omega-null pairs, up to max_states members.
std::vector<CapacitySequence> equivalent_sequences(const PairingTable& pairing,
                                                   const CapacitySequence& seq,
                                                   std::size_t max_states = 20000);

// Upper bound 1 / (2 Q) on the capacity from one feasible sequence.
struct Certificate {
  double capacity_upper_bound = 0.0;
  double value = 0.0;
  bool exact = false;              // verified in rational arithmetic
  std::string exact_value;         // Q as a reduced fraction when exact
  std::string exact_upper_bound;   // 1/(2Q) as a reduced fraction when exact
  FeasibilityReport report;
};

Certificate certify(const HPolytope& k, const CapacitySequence& seq, bool rational = true,
                    double tol = 1e-9);

using Rational = boost::multiprecision::cpp_rational;

// Best rational approximation with denominator at most max_den.
Rational to_rational(double x, long long max_den = 1'000'000);

// Exact objective over rational data (normals as rows of length 2n).
Rational sequence_action_exact(const std::vector<std::vector<Rational>>& normals,
                               const std::vector<int>& facets, const std::vector<Rational>& betas);

}  // namespace ehz
