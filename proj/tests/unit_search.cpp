#include "body_library.hpp"
#include "json_io.hpp"
#include "search.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace ehz;
using testutil::vec;

namespace {

bool same_maximizers(const CapacityResult& a, const CapacityResult& b) {
  if (a.maximizers.size() != b.maximizers.size()) return false;
  for (std::size_t i = 0; i < a.maximizers.size(); ++i) {
    const auto& x = a.maximizers[i].entries;
    const auto& y = b.maximizers[i].entries;
    if (x.size() != y.size()) return false;
    for (std::size_t j = 0; j < x.size(); ++j)
      if (x[j].facet != y[j].facet || std::abs(x[j].beta - y[j].beta) > 1e-9) return false;
  }
  return true;
}

double diag_beta(const HPolytope& y, const CapacitySequence& s) {
  for (const SequenceEntry& e : s.entries)
    if (y.normal(e.facet).minCoeff() > 0.4) return e.beta;
  return 0.0;
}

}  // namespace

TEST_CASE("simplex capacity") {
  const HPolytope s = standard_simplex(4);
  for (Engine e : {Engine::Brute, Engine::Bnb}) {
    const CapacityResult r = compute_capacity(s, e);
    CHECK(r.certified);
    CHECK(r.complete);
    CHECK(r.capacity == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(systolic_ratio(r.capacity, volume(s), 2) == doctest::Approx(0.75).epsilon(1e-9));
  }
}

TEST_CASE("Y: engines agree, branch-and-bound evaluates fewer orders") {
  const HPolytope y = body_y();
  const CapacityResult brute = capacity_bruteforce(y);
  const CapacityResult bnb = capacity_bnb(y);
  CHECK(brute.optimal_value == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(bnb.optimal_value == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(brute.capacity == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(bnb.certified);
  CHECK(bnb.gap <= 1e-9);
  CHECK(same_maximizers(brute, bnb));
  CHECK(bnb.stats.orders_evaluated < brute.stats.orders_evaluated);
}

TEST_CASE("Y: degenerate family spans the diagonal coefficient from 0 to 2") {
  const HPolytope y = body_y();
  const CapacityResult r = capacity_bnb(y);
  REQUIRE_FALSE(r.families.empty());
  bool low = false, high = false;
  for (const MaximizerFamily& f : r.families) {
    CHECK(f.dimension >= 1);
    for (const CapacitySequence& s : f.samples) {
      CHECK(sequence_action(y, s) == doctest::Approx(2.0).epsilon(1e-9));
      const double b = diag_beta(y, s);
      low = low || std::abs(b) < 1e-9;
      high = high || std::abs(b - 2.0) < 1e-9;
    }
  }
  CHECK(low);
  CHECK(high);
}

TEST_CASE("planar capacity equals area") {
  for (int sides : {3, 4, 5, 6, 9}) {
    const HPolytope p = regular_polygon(sides, 0.3);
    const CapacityResult r = capacity_bruteforce(p);
    CHECK(r.capacity == doctest::Approx(volume(p)).epsilon(1e-9));
  }
}

TEST_CASE("search configuration guards") {
  const HPolytope y = body_y();
  SearchConfig tiny;
  tiny.budget = 10;
  CHECK_THROWS_AS(capacity_bruteforce(y, tiny), Error);
  SearchConfig bad_gap;
  bad_gap.target_gap = 1.0;
  CHECK_THROWS_AS(capacity_bnb(y, bad_gap), Error);
  SearchConfig bad_cap;
  bad_cap.max_subset = -1;
  CHECK_THROWS_AS(capacity_bnb(y, bad_cap), Error);
}

TEST_CASE("a subset cap marks the result incomplete") {
  SearchConfig cfg;
  cfg.max_subset = 4;
  const CapacityResult r = capacity_bnb(body_y(), cfg);
  CHECK_FALSE(r.complete);
  CHECK_FALSE(r.certified);
  CHECK(r.max_subset == 4);
  CHECK(r.optimal_value == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("node budget yields an uncertified incumbent with a gap") {
  SearchConfig cfg;
  cfg.budget = 800;
  const CapacityResult r = capacity_bnb(twenty_four_cell(), cfg);
  CHECK(r.optimal_value > 0.0);
  CHECK(r.value_upper_bound > r.optimal_value);
  CHECK(r.gap > cfg.target_gap);
  CHECK_FALSE(r.certified);

  SearchConfig starved;
  starved.budget = 1;
  starved.seed_nodes = 1;
  try {
    capacity_bnb(pentagon_product(), starved);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BudgetExceeded);
  }
}

TEST_CASE("results do not depend on the thread count") {
  const HPolytope y = body_y();
  SearchConfig one, many;
  one.threads = 1;
  many.threads = 4;
  CHECK(dump(result_to_json(capacity_bnb(y, one))) == dump(result_to_json(capacity_bnb(y, many))));
  CHECK(dump(result_to_json(capacity_bruteforce(y, one))) == dump(result_to_json(capacity_bruteforce(y, many))));
}

TEST_CASE("order counts and systolic ratio") {
  CHECK(bruteforce_order_count(4, 4) == doctest::Approx(6 + 8 + 6));
  CHECK(systolic_ratio(0.25, 1.0 / 32, 2) == doctest::Approx(1.0));
  CHECK(systolic_ratio(1.0, M_PI, 1) == doctest::Approx(1.0 / M_PI));
}
