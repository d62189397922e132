#pragma once

// Hyperplane cuts of a polytope, additivity defects, level sweeps, and
// combinatorial cuts (maximizing sequences whose prefix sums to c v).

#include "search.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ehz {

// Hyperplane {<x, v> = level}; v is normalized on construction.
struct CutSpec {
  Vec normal;
  double level = 0.0;
};

CutSpec cut_at_depth(const HPolytope& k, const Vec& v, double depth);
double cut_depth(const HPolytope& k, const CutSpec& spec);  // h_K(v) - level

struct CutPieces {
  HPolytope k1;  // {<x,v> >= level}, cut facet normal -v
  HPolytope k2;  // {<x,v> <= level}, cut facet normal +v
  std::vector<int> origin1;  // facet of K behind each facet of k1, -1 for the cut facet
  std::vector<int> origin2;
  int cut_facet1 = -1;
  int cut_facet2 = -1;
  CutSpec spec;
};

CutPieces cut(const HPolytope& k, const CutSpec& spec);

struct DefectReport {
  double capacity = 0.0;  // c(K)
  double c1 = 0.0;
  double c2 = 0.0;
  double raw_defect = 0.0;  // c1 + c2 - c(K)
  double defect = 0.0;      // raw_defect with tiny negatives clamped to 0
  bool certified = true;    // all three capacities certified
};

// Uses `whole` for c(K) when given.
DefectReport additivity_defect(const HPolytope& k, const CutSpec& spec,
                               const SearchConfig& config = {},
                               const CapacityResult* whole = nullptr);

struct SweepRow {
  double depth = 0.0;
  double c1 = 0.0, c2 = 0.0, sum = 0.0, capacity = 0.0, defect = 0.0;
  bool ok = false;
  std::string error;
};

std::vector<SweepRow> sweep(const HPolytope& k, const Vec& v, const std::vector<double>& depths,
                            const SearchConfig& config = {});
std::string sweep_csv(const std::vector<SweepRow>& rows);

struct CombinatorialCut {
  CapacitySequence sequence;  // facet indices of K
  int split = 0;              // prefix length m
  double coefficient = 0.0;   // c with sum_{i<=m} beta_i n_i = c v
  double a1 = 0.0, a2 = 0.0;  // prefix and suffix objective blocks
  double h1 = 0.0, h2 = 0.0;
  double match_residual = 0.0;  // relative residual of the equation for c
  std::string route;            // "maximizer" or "pieces"
};

struct CombinatorialCutSearch {
  std::vector<CombinatorialCut> cuts;
  CapacityResult whole;
  DefectReport defect;
  bool found() const { return !cuts.empty(); }
};

// Checks every defining condition of a combinatorial cut; returns the
// verified record or nothing.
std::optional<CombinatorialCut> verify_combinatorial_cut(const HPolytope& k, const CutSpec& spec,
                                                         double capacity, double optimal_value,
                                                         const CapacitySequence& seq, int split);

CombinatorialCutSearch find_combinatorial_cut(const HPolytope& k, const Vec& v, double depth,
                                              const SearchConfig& config = {},
                                              bool all = false);

struct PieceSequences {
  CapacitySequence seq1;  // on K1 (facet indices of k1)
  CapacitySequence seq2;  // on K2
  FeasibilityReport feasible1, feasible2;
  double c1 = 0.0, c2 = 0.0;  // solver capacities of the pieces
  double residual_h1 = 0.0;   // |H1 - A1/A|
  double residual_sum = 0.0;  // |A - A1 - A2|
  double residual_c1 = 0.0;   // |c(K1) - A1/(2A^2)|
  double residual_c2 = 0.0;   // |c(K2) - A2/(2A^2)|
  double residual_total = 0.0;  // |c(K1) + c(K2) - c(K)|
  bool ok = false;
};

PieceSequences induced_piece_sequences(const HPolytope& k, const CutSpec& spec,
                                       const CombinatorialCut& comb,
                                       const SearchConfig& config = {}, double tol = 1e-9);

}  // namespace ehz
