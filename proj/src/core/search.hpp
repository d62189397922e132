#pragma once

// Global maximization of the sequence objective over M(K): an exhaustive
// enumeration engine and a depth-first branch-and-bound engine.

#include "sequence.hpp"

#include <string>
#include <vector>

namespace ehz {

struct MaximizerFamily {
  std::vector<int> order;                 // facet indices, canonical class representative
  int dimension = 0;
  std::vector<CapacitySequence> samples;  // boundary representatives, zero entries dropped
  std::vector<Vec> sample_coefficients;   // the same samples as betas aligned with order
  CapacitySequence interior;
};

struct SearchStats {
  long long nodes = 0;             // prefixes expanded (bnb) or subsets visited (brute)
  long long orders_evaluated = 0;  // fixed-order solves
  long long pruned_pair = 0;
  long long pruned_adjacency = 0;
  long long pruned_bound = 0;
};

enum class Engine { Brute, Bnb };
enum class BoundKind { Spectral, Lift, Combined };

struct SearchConfig {
  long long budget = 2'000'000;  // orders (brute) or nodes (bnb)
  double target_gap = 1e-9;
  int max_subset = 0;            // 0 means the facet count
  bool adjacency = true;         // consecutive facets must meet on K (bnb)
  BoundKind bound = BoundKind::Combined;
  int threads = 0;               // 0 means hardware concurrency
  long long seed_nodes = 2000;   // sequential warm start for the parallel bnb
  double tie_tol = 1e-9;         // relative
};

struct CapacityResult {
  double capacity = 0.0;
  double optimal_value = 0.0;     // A*
  double value_upper_bound = 0.0; // proven bound on A*
  double gap = 0.0;               // (bound - A*) / A*
  bool certified = false;         // gap within target and no subset cap below the facet count
  int max_subset = 0;             // largest support searched
  bool complete = true;           // every support size was searched
  std::string engine;
  std::vector<CapacitySequence> maximizers;  // canonical representatives
  std::vector<MaximizerFamily> families;
  SearchStats stats;
};

CapacityResult capacity_bruteforce(const HPolytope& k, const SearchConfig& config = {});
CapacityResult capacity_bnb(const HPolytope& k, const SearchConfig& config = {});
CapacityResult compute_capacity(const HPolytope& k, Engine engine, const SearchConfig& config = {});

// Number of (subset, cyclic order) pairs the exhaustive engine visits.
double bruteforce_order_count(int facets, int max_subset);

// c^n / (n! vol)
double systolic_ratio(double capacity, double volume, int half_dim);

}  // namespace ehz
